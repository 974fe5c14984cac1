// Copyright 2026 the seqde authors.
// SPDX-License-Identifier: Apache-2.0

#ifndef SEQDE_SEQDE_HPP
#define SEQDE_SEQDE_HPP

#include "seqde/acquisition.hpp"
#include "seqde/bench.hpp"
#include "seqde/csv.hpp"
#include "seqde/density.hpp"
#include "seqde/errors.hpp"
#include "seqde/experiment.hpp"
#include "seqde/gp.hpp"
#include "seqde/input.hpp"
#include "seqde/interp.hpp"
#include "seqde/kl.hpp"
#include "seqde/oscillator.hpp"
#include "seqde/parallel.hpp"
#include "seqde/pso.hpp"
#include "seqde/rng.hpp"
#include "seqde/sampler.hpp"

#endif // SEQDE_SEQDE_HPP
