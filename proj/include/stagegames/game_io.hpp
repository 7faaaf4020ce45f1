#pragma once

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "stagegames/errors.hpp"
#include "stagegames/game.hpp"

namespace stagegames {

namespace detail {

inline std::vector<std::string> parse_name_list(const nlohmann::json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_array() || j[key].empty())
    throw ValidationError(std::string("game file: missing or empty \"") + key + "\" array");
  std::vector<std::string> names;
  names.reserve(j[key].size());
  for (const auto& item : j[key]) {
    if (!item.is_string())
      throw ValidationError(std::string("game file: \"") + key + "\" entries must be strings");
    names.push_back(item.get<std::string>());
  }
  return names;
}

template <class T>
T parse_nested(const nlohmann::json& j) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ValidationError("game file: tensor is not a numeric nested array");
  }
}

}  // namespace detail

/// Parses the game JSON:
///   {"states": [...], "actions1": [...], "actions2": [...],
///    "payoff": [i][j][w], "kernel": [i][j][w][w'] }
/// or "transition" (row-stochastic, converted via kernel_from_matrix) in place
/// of "kernel". Exactly one of the two must be present.
inline Game game_from_json(const nlohmann::json& j) {
  GameDef def;
  def.states = detail::parse_name_list(j, "states");
  def.actions1 = detail::parse_name_list(j, "actions1");
  def.actions2 = detail::parse_name_list(j, "actions2");

  if (!j.contains("payoff")) throw ValidationError("game file: missing \"payoff\"");
  def.payoff =
      detail::parse_nested<std::vector<std::vector<std::vector<double>>>>(j["payoff"]);

  const bool has_kernel = j.contains("kernel");
  const bool has_transition = j.contains("transition");
  if (has_kernel == has_transition)
    throw ValidationError("game file: exactly one of \"kernel\"/\"transition\" must be present");
  using Tensor4 = std::vector<std::vector<std::vector<std::vector<double>>>>;
  if (has_kernel)
    def.kernel = detail::parse_nested<Tensor4>(j["kernel"]);
  else
    def.kernel = kernel_from_matrix(detail::parse_nested<Tensor4>(j["transition"]));

  return validate_game(def);
}

inline Game load_game(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open game file: " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("game file is not valid JSON: " + std::string(e.what()));
  }
  return game_from_json(j);
}

inline nlohmann::json game_to_json(const Game& game) {
  const std::size_t S = game.num_states(), m = game.num_actions1(), n = game.num_actions2();
  nlohmann::json j;
  j["states"] = game.states();
  j["actions1"] = game.actions1();
  j["actions2"] = game.actions2();
  auto payoff = nlohmann::json::array();
  auto kernel = nlohmann::json::array();
  for (std::size_t i = 0; i < m; ++i) {
    auto pi = nlohmann::json::array();
    auto ki = nlohmann::json::array();
    for (std::size_t jj = 0; jj < n; ++jj) {
      auto pj = nlohmann::json::array();
      auto kj = nlohmann::json::array();
      for (std::size_t w = 0; w < S; ++w) {
        pj.push_back(game.payoff(i, jj, w));
        auto row = nlohmann::json::array();
        for (std::size_t w2 = 0; w2 < S; ++w2) row.push_back(game.kernel(i, jj, w, w2));
        kj.push_back(std::move(row));
      }
      pi.push_back(std::move(pj));
      ki.push_back(std::move(kj));
    }
    payoff.push_back(std::move(pi));
    kernel.push_back(std::move(ki));
  }
  j["payoff"] = std::move(payoff);
  j["kernel"] = std::move(kernel);
  return j;
}

inline void save_game(const Game& game, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ValidationError("cannot open output file: " + path);
  os << game_to_json(game).dump(2) << '\n';
}

/// Loads a payoff matrix from JSON: either a bare 2-d array or an object with
/// a "matrix" member.
inline Matrix load_matrix(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ValidationError("cannot open matrix file: " + path);
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("matrix file is not valid JSON: " + std::string(e.what()));
  }
  const nlohmann::json& rows = j.is_object() && j.contains("matrix") ? j["matrix"] : j;
  const auto nested = detail::parse_nested<std::vector<std::vector<double>>>(rows);
  if (nested.empty() || nested.front().empty())
    throw ValidationError("matrix file: matrix must be non-empty");
  Matrix a(nested.size(), nested.front().size());
  for (std::size_t r = 0; r < nested.size(); ++r) {
    if (nested[r].size() != a.cols()) throw ValidationError("matrix file: ragged rows");
    for (std::size_t c = 0; c < a.cols(); ++c) a(r, c) = nested[r][c];
  }
  return a;
}

}  // namespace stagegames
