#pragma once

// Umbrella header: the whole workbench.

#include "atlas.hpp"
#include "bitset.hpp"
#include "catalog.hpp"
#include "conformity.hpp"
#include "core.hpp"
#include "extension.hpp"
#include "formula.hpp"
#include "fragment.hpp"
#include "language.hpp"
#include "lindenbaum.hpp"
#include "matrix.hpp"
#include "parse.hpp"
#include "report.hpp"
#include "search.hpp"
#include "sigma.hpp"
