#pragma once

#include "cli.hpp"
#include "eigensolve.hpp"
#include "errors.hpp"
#include "io.hpp"
#include "lattice_grid.hpp"
#include "sparse.hpp"
#include "spectra.hpp"
#include "star_chain.hpp"
#include "version.hpp"
