// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "adain.hpp"
#include "depth.hpp"
#include "error.hpp"
#include "image_io.hpp"
#include "layers.hpp"
#include "manifest.hpp"
#include "network.hpp"
#include "pipeline.hpp"
#include "style_cache.hpp"
#include "tensor.hpp"
#include "weights.hpp"
