// Copyright 2026 The hteb Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Everything in one include. Pulls in httplib and OpenSSL through the gateway.

#pragma once

#include "hteb/cli/commands.hpp"
#include "hteb/cli/config.hpp"
#include "hteb/cli/toml_lite.hpp"
#include "hteb/data/dataset.hpp"
#include "hteb/error.hpp"
#include "hteb/eval/classifier.hpp"
#include "hteb/eval/embedder.hpp"
#include "hteb/eval/kmeans.hpp"
#include "hteb/eval/metrics.hpp"
#include "hteb/eval/tasks.hpp"
#include "hteb/gateway/cache.hpp"
#include "hteb/gateway/gateway.hpp"
#include "hteb/gateway/http_transport.hpp"
#include "hteb/gateway/mock_transport.hpp"
#include "hteb/gateway/transport.hpp"
#include "hteb/hashing.hpp"
#include "hteb/language.hpp"
#include "hteb/qc/detectors.hpp"
#include "hteb/qc/judge.hpp"
#include "hteb/report/aggregate.hpp"
#include "hteb/report/emit.hpp"
#include "hteb/report/inference.hpp"
#include "hteb/score.hpp"
#include "hteb/stats/agreement.hpp"
#include "hteb/stats/bootstrap.hpp"
#include "hteb/stats/descriptive.hpp"
#include "hteb/stats/drift.hpp"
#include "hteb/stats/holm.hpp"
#include "hteb/stats/signed_rank.hpp"
#include "hteb/stats/split_half.hpp"
#include "hteb/taxonomy.hpp"
#include "hteb/transform/engine.hpp"
#include "hteb/transform/prompts.hpp"
#include "hteb/transform/sampling.hpp"
#include "hteb/vector_ops.hpp"
