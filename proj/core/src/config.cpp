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

#include "cheaptalk/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

namespace cheaptalk {
namespace {

using nlohmann::json;

// Best-effort line lookup for a key, so schema errors point somewhere
// useful in the file. Config files are small; a text scan is fine.
int line_of_key(const std::string& text, const std::string& key) {
  const std::string needle = "\"" + key + "\"";
  const std::size_t pos = text.find(needle);
  if (pos == std::string::npos) return 0;
  int line = 1;
  for (std::size_t i = 0; i < pos; ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

int line_of_offset(const std::string& text, std::size_t offset) {
  int line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

class ConfigReader {
 public:
  ConfigReader(const std::string& text, const std::string& origin)
      : text_(text), origin_(origin) {}

  [[noreturn]] void fail(const std::string& key,
                         const std::string& message) const {
    std::ostringstream out;
    out << origin_;
    if (const int line = line_of_key(text_, key)) out << ":" << line;
    out << ": " << (key.empty() ? "" : key + ": ") << message;
    throw std::runtime_error(out.str());
  }

  void check_keys(const json& object, const std::string& where,
                  const std::set<std::string>& known) const {
    if (!object.is_object()) fail(where, "must be an object");
    for (const auto& item : object.items()) {
      if (!known.count(item.key())) {
        fail(item.key(), "unknown key in " + where);
      }
    }
  }

  template <typename T>
  void read(const json& object, const std::string& key, T& into) const {
    if (!object.contains(key)) return;
    try {
      into = object.at(key).get<T>();
    } catch (const json::exception&) {
      fail(key, "has the wrong type");
    }
  }

  void read_double_list(const json& object, const std::string& key,
                        std::vector<double>& into) const {
    if (!object.contains(key)) return;
    const json& value = object.at(key);
    if (!value.is_array() || value.empty()) {
      fail(key, "must be a non-empty array of numbers");
    }
    into.clear();
    for (const json& item : value) {
      if (!item.is_number()) fail(key, "must contain only numbers");
      into.push_back(item.get<double>());
    }
  }

 private:
  const std::string& text_;
  const std::string& origin_;
};

}  // namespace

SweepConfig default_config() {
  SweepConfig config;
  config.bias_grid = default_bias_grid();
  return config;
}

SweepConfig parse_config_text(const std::string& text,
                              const std::string& origin) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(origin + ":" +
                             std::to_string(line_of_offset(text, e.byte)) +
                             ": " + e.what());
  }
  ConfigReader reader(text, origin);
  if (!root.is_object()) reader.fail("", "config must be a JSON object");
  reader.check_keys(root, "config", {"game", "learner", "sim", "sweep"});

  SweepConfig config = default_config();

  if (root.contains("game")) {
    const json& game = root.at("game");
    reader.check_keys(game, "game",
                      {"n_types", "n_messages", "n_actions", "bias", "prior",
                       "loss"});
    reader.read(game, "n_types", config.game.n_types);
    // baseline construction unless overridden explicitly
    config.game.n_messages = config.game.n_types;
    config.game.n_actions = 2 * config.game.n_types - 1;
    reader.read(game, "n_messages", config.game.n_messages);
    reader.read(game, "n_actions", config.game.n_actions);
    reader.read(game, "bias", config.game.bias);
    if (game.contains("prior")) {
      try {
        config.game.prior =
            prior_kind_from_name(game.at("prior").get<std::string>());
      } catch (const std::exception& e) {
        reader.fail("prior", e.what());
      }
    }
    if (game.contains("loss")) {
      try {
        config.game.loss =
            loss_kind_from_name(game.at("loss").get<std::string>());
      } catch (const std::exception& e) {
        reader.fail("loss", e.what());
      }
    }
  }

  if (root.contains("learner")) {
    const json& learner = root.at("learner");
    reader.check_keys(learner, "learner", {"alpha", "lambda", "tau1"});
    reader.read(learner, "alpha", config.learner.alpha);
    reader.read(learner, "lambda", config.learner.lambda);
    reader.read(learner, "tau1", config.learner.tau1);
  }

  if (root.contains("sim")) {
    const json& sim = root.at("sim");
    reader.check_keys(
        sim, "sim", {"max_periods", "window", "rel_tol", "check_stride",
                     "seed"});
    reader.read(sim, "max_periods", config.sim.max_periods);
    reader.read(sim, "window", config.sim.window);
    reader.read(sim, "rel_tol", config.sim.rel_tol);
    reader.read(sim, "check_stride", config.sim.check_stride);
    reader.read(sim, "seed", config.sim.seed);
  }

  if (root.contains("sweep")) {
    const json& sweep = root.at("sweep");
    reader.check_keys(sweep, "sweep",
                      {"bias_grid", "alpha_grid", "lambda_grid",
                       "n_replications", "base_seed", "workers",
                       "store_policies"});
    reader.read_double_list(sweep, "bias_grid", config.bias_grid);
    reader.read_double_list(sweep, "alpha_grid", config.alpha_grid);
    reader.read_double_list(sweep, "lambda_grid", config.lambda_grid);
    reader.read(sweep, "n_replications", config.n_replications);
    reader.read(sweep, "base_seed", config.base_seed);
    reader.read(sweep, "workers", config.workers);
    reader.read(sweep, "store_policies", config.store_policies);
  }

  // Surface domain violations with file context rather than from deep
  // inside a run.
  try {
    build_game(config.game);
    validate(config);
  } catch (const std::exception& e) {
    throw std::runtime_error(origin + ": " + e.what());
  }
  return config;
}

SweepConfig parse_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

}  // namespace cheaptalk
