#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace wrangle {

/// Probabilistic finite-state machine with per-state emissions. A string
/// c_1..c_L (L >= 1) is generated by a path s_1..s_L with probability
///   initial[s_1] e[s_1][c_1] * prod next(s_{k-1} -> s_k) e[s_k][c_k] * stop[s_L];
/// the empty string has probability empty_weight.
class Pfsm {
 public:
  struct Edge {
    std::size_t to;
    double probability;
  };

  explicit Pfsm(std::string name) : name_(std::move(name)) {}

  std::size_t add_state(double initial, double stop);
  void add_edge(std::size_t from, std::size_t to, double probability);
  void emit(std::size_t state, unsigned char c, double probability);
  void set_empty_weight(double weight) { empty_weight_ = weight; }

  const std::string& name() const { return name_; }
  std::size_t size() const { return initial_.size(); }
  double initial(std::size_t s) const { return initial_[s]; }
  double stop(std::size_t s) const { return stop_[s]; }
  double empty_weight() const { return empty_weight_; }
  double emission(std::size_t s, unsigned char c) const { return emission_[s][c]; }
  const std::vector<Edge>& edges(std::size_t s) const { return edges_[s]; }

  /// Throws invalid_argument unless initial weights plus empty_weight sum to
  /// 1, each state's edges plus stop sum to 1, and each state's emissions sum
  /// to 1 (tolerance 1e-9).
  void validate() const;

 private:
  std::string name_;
  std::vector<double> initial_;
  std::vector<double> stop_;
  std::vector<std::array<double, 256>> emission_;
  std::vector<std::vector<Edge>> edges_;
  double empty_weight_ = 0.0;
};

/// Scaled forward algorithm. Returns log P(value); -infinity when the machine
/// cannot produce the value.
double pfsm_forward(const Pfsm& machine, std::string_view value);

}  // namespace wrangle
