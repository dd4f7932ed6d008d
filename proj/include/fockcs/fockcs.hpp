#pragma once

// Umbrella header for the coherent-state toolkit.

#include "fockcs/numerics.hpp"
#include "fockcs/spectra.hpp"
#include "fockcs/weights.hpp"
#include "fockcs/states.hpp"
#include "fockcs/operators.hpp"
#include "fockcs/verify.hpp"
#include "fockcs/io.hpp"
