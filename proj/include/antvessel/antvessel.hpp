#pragma once

#include "antvessel/acs/classifier.hpp"
#include "antvessel/acs/core.hpp"
#include "antvessel/acs/params.hpp"
#include "antvessel/acs/segment.hpp"
#include "antvessel/acs/tsp.hpp"
#include "antvessel/dataset.hpp"
#include "antvessel/evaluation.hpp"
#include "antvessel/feature_id.hpp"
#include "antvessel/feature_io.hpp"
#include "antvessel/features.hpp"
#include "antvessel/grid.hpp"
#include "antvessel/provenance.hpp"
#include "antvessel/raster_io.hpp"
#include "antvessel/reference.hpp"
#include "antvessel/report.hpp"
#include "antvessel/sampling.hpp"
#include "antvessel/selection/cfs.hpp"
#include "antvessel/selection/fisher.hpp"
#include "antvessel/selection/gini.hpp"
#include "antvessel/selection/relief.hpp"
#include "antvessel/selection/runner.hpp"
#include "antvessel/selection/wrapper.hpp"
#include "antvessel/synth.hpp"
