// Copyright 2026 The Cheaptalk Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "cheaptalk/sweep.hpp"

namespace cheaptalk {

// Per-run records go to JSON lines (append-friendly, crash-tolerant during
// long sweeps); aggregates go to CSV (directly plottable). All floating
// point values are written with 17 significant digits, so records
// round-trip bit-for-bit.

void write_records_jsonl(const std::vector<RunRecord>& records,
                         const std::string& path);
std::vector<RunRecord> read_records_jsonl(const std::string& path);

void write_aggregates_csv(const std::vector<AggregateRecord>& aggregates,
                          const std::string& path);
std::vector<AggregateRecord> read_aggregates_csv(const std::string& path);

// Fixed-width hex form used for game fingerprints in records.
std::string fingerprint_hex(std::uint64_t fingerprint);

// %.17g formatting used for every double that reaches disk.
std::string format_double(double value);

}  // namespace cheaptalk
