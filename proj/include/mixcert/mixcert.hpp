#pragma once

#include "mixcert/chain.hpp"
#include "mixcert/coupling_operator.hpp"
#include "mixcert/coupling_sim.hpp"
#include "mixcert/dobrushin.hpp"
#include "mixcert/error.hpp"
#include "mixcert/format.hpp"
#include "mixcert/matrix_io.hpp"
#include "mixcert/paper_examples.hpp"
#include "mixcert/random.hpp"
#include "mixcert/report.hpp"
#include "mixcert/sim_report.hpp"
#include "mixcert/spectral.hpp"
