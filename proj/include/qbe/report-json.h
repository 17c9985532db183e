// qbe/report-json.h

// Copyright 2026  The qbe-kws Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef QBE_REPORT_JSON_H_
#define QBE_REPORT_JSON_H_

#include <json.hpp>

#include "qbe/geometry.h"
#include "qbe/retrieval-eval.h"
#include "qbe/subsequence-dtw.h"

namespace qbe {

nlohmann::json ToJson(const AnisotropyReport &report);
nlohmann::json ToJson(const RogueDimensionReport &report);
nlohmann::json ToJson(const RetrievalMetrics &metrics);

// One search output line; the span is converted to seconds.
nlohmann::json SearchLine(const MatchResult &match, int rank,
                          double frame_rate_hz);

}  // namespace qbe

#endif  // QBE_REPORT_JSON_H_
