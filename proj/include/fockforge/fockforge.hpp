// fockforge.hpp: all modules

#pragma once

#include "linalg.hpp"
#include "random.hpp"
#include "fock_space.hpp"
#include "fock_reps.hpp"
#include "bogolubov.hpp"
#include "quasifree.hpp"
#include "thermal.hpp"
#include "lattice.hpp"
#include "pauli_fierz.hpp"
#include "report.hpp"
#include "battery.hpp"
