/*
 * Copyright (C) 2026 The trackscan Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Umbrella header.

#pragma once

#include "trackscan/apk.hpp"
#include "trackscan/byte_source.hpp"
#include "trackscan/corpus.hpp"
#include "trackscan/csv.hpp"
#include "trackscan/dex.hpp"
#include "trackscan/domain.hpp"
#include "trackscan/error.hpp"
#include "trackscan/genres.hpp"
#include "trackscan/host_scan.hpp"
#include "trackscan/manifest.hpp"
#include "trackscan/matcher.hpp"
#include "trackscan/mutf8.hpp"
#include "trackscan/pipeline.hpp"
#include "trackscan/prevalence.hpp"
#include "trackscan/ranking.hpp"
#include "trackscan/stats.hpp"
#include "trackscan/tracker_kb.hpp"
#include "trackscan/version.hpp"
