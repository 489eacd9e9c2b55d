#pragma once

#include "metriclat/errors.hpp"
#include "metriclat/random.hpp"
#include "metriclat/opcore.hpp"
#include "metriclat/symbol.hpp"
#include "metriclat/metric.hpp"
#include "metriclat/matrix_io.hpp"
#include "metriclat/lattice.hpp"
#include "metriclat/similarity.hpp"
#include "metriclat/quasiherm.hpp"
#include "metriclat/riesz.hpp"
#include "metriclat/pipengine.hpp"
#include "metriclat/discretize.hpp"
#include "metriclat/scenarios.hpp"
#include "metriclat/report.hpp"
