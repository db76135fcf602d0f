#pragma once

#include "yoshida/quatcore/algebra.hpp"
#include "yoshida/quatcore/ideals.hpp"
#include "yoshida/quatcore/lattice.hpp"
#include "yoshida/quatcore/short_vectors.hpp"
