#pragma once

#include "ymhk/algebra.hpp"
#include "ymhk/config.hpp"
#include "ymhk/covariant.hpp"
#include "ymhk/diagnostics.hpp"
#include "ymhk/energy.hpp"
#include "ymhk/experiment.hpp"
#include "ymhk/flow.hpp"
#include "ymhk/fourier.hpp"
#include "ymhk/lattice.hpp"
#include "ymhk/parallel.hpp"
#include "ymhk/random_field.hpp"
#include "ymhk/report.hpp"
#include "ymhk/snapshot_io.hpp"
#include "ymhk/spectral.hpp"
