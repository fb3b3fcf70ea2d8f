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

#include "cheaptalk/game.hpp"

namespace cheaptalk {

enum class FigureKind {
  kDeviationVsBias,       // mean deviation-from-best-response metrics
  kEpsNashFrequencyGrid,  // eps-Nash frequency per hyperparameter cell
  kModalPolicyHeatmap,    // modal sender/receiver play per bias
  kPayoffDistribution,    // payoff histograms with benchmark overlays
  kMiDistribution,        // mutual information histograms with overlays
  kEquilibriumLadder,     // equilibrium MI levels vs realised modal MI
};

FigureKind figure_kind_from_name(const std::string& name);
std::string figure_kind_name(FigureKind kind);

struct FigureSpec {
  FigureKind kind = FigureKind::kDeviationVsBias;
  std::vector<std::string> aggregate_paths;
  std::string output_stem;  // writes <stem>.csv and <stem>.svg
  GameConfig game;          // used by the equilibrium ladder benchmarks
};

// Emits the tidy data file (columns: series,x,y,w) holding exactly the
// plotted values, plus a small self-contained SVG. The data file is the
// contract; the image is a convenience. Nothing is written if the inputs
// are empty or lack the columns the kind needs.
void render_figure(const FigureSpec& spec);

}  // namespace cheaptalk
