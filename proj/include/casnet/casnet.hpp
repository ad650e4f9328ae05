#pragma once

#include "casnet/class_table.hpp"
#include "casnet/cluster.hpp"
#include "casnet/corrupt.hpp"
#include "casnet/dense_map.hpp"
#include "casnet/geometry.hpp"
#include "casnet/io.hpp"
#include "casnet/losses.hpp"
#include "casnet/metrics.hpp"
#include "casnet/panoptic.hpp"
#include "casnet/render.hpp"
#include "casnet/rng.hpp"
#include "casnet/scene.hpp"
#include "casnet/targets.hpp"
