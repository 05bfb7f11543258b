// Copyright (c) 2026 anisorobin contributors
// SPDX-License-Identifier: Apache-2.0
//
// Umbrella header: the whole library except the CLI layer (include
// anisorobin/cli.hpp separately; it depends on the vendored CLI11).
#pragma once

#include "anisorobin/analysis.hpp"
#include "anisorobin/errors.hpp"
#include "anisorobin/fem.hpp"
#include "anisorobin/geometry.hpp"
#include "anisorobin/mesh.hpp"
#include "anisorobin/norms.hpp"
#include "anisorobin/radial.hpp"
#include "anisorobin/selfcheck.hpp"
#include "anisorobin/specio.hpp"
