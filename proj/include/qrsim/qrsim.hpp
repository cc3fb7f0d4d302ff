#pragma once

// Umbrella header for the quantum-reservoir learning simulator.

#include "qrsim/config.hpp"
#include "qrsim/csv.hpp"
#include "qrsim/errors.hpp"
#include "qrsim/linalg.hpp"
#include "qrsim/readout.hpp"
#include "qrsim/reservoir.hpp"
#include "qrsim/rng.hpp"
#include "qrsim/spin_system.hpp"
#include "qrsim/tasks.hpp"
