#pragma once

#include "hoinf/audit.hpp"
#include "hoinf/combinatorics.hpp"
#include "hoinf/cut.hpp"
#include "hoinf/eigen.hpp"
#include "hoinf/errors.hpp"
#include "hoinf/experiment.hpp"
#include "hoinf/hypergraph.hpp"
#include "hoinf/inference.hpp"
#include "hoinf/json_io.hpp"
#include "hoinf/labels.hpp"
#include "hoinf/model.hpp"
#include "hoinf/parallel.hpp"
#include "hoinf/rng.hpp"
#include "hoinf/spectral.hpp"
#include "hoinf/tensor.hpp"
#include "hoinf/unfolding.hpp"
#include "hoinf/version.hpp"
