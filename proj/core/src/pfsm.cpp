#include "wrangle/pfsm.hpp"

#include <cmath>
#include <limits>

#include "wrangle/error.hpp"

namespace wrangle {

std::size_t Pfsm::add_state(double initial, double stop) {
  initial_.push_back(initial);
  stop_.push_back(stop);
  emission_.push_back({});
  edges_.emplace_back();
  return initial_.size() - 1;
}

void Pfsm::add_edge(std::size_t from, std::size_t to, double probability) {
  edges_.at(from).push_back({to, probability});
}

void Pfsm::emit(std::size_t state, unsigned char c, double probability) {
  emission_.at(state)[c] += probability;
}

void Pfsm::validate() const {
  auto near_one = [](double x) { return std::abs(x - 1.0) <= 1e-9; };
  double start = empty_weight_;
  for (double p : initial_) start += p;
  if (!near_one(start)) throw Error(ErrorCode::invalid_argument, name_ + ": initial weights do not sum to 1");
  for (std::size_t s = 0; s < size(); ++s) {
    double out = stop_[s];
    for (const auto& e : edges_[s]) out += e.probability;
    if (!near_one(out))
      throw Error(ErrorCode::invalid_argument, name_ + ": state " + std::to_string(s) + " leaks mass");
    double emitted = 0.0;
    for (double p : emission_[s]) emitted += p;
    if (!near_one(emitted))
      throw Error(ErrorCode::invalid_argument, name_ + ": state " + std::to_string(s) + " emissions");
  }
}

double pfsm_forward(const Pfsm& machine, std::string_view value) {
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();
  if (value.empty()) return machine.empty_weight() > 0 ? std::log(machine.empty_weight()) : kNegInf;
  const std::size_t n = machine.size();
  std::vector<double> alpha(n, 0.0), next(n, 0.0);
  double log_scale = 0.0;
  auto first = static_cast<unsigned char>(value[0]);
  for (std::size_t s = 0; s < n; ++s) alpha[s] = machine.initial(s) * machine.emission(s, first);
  for (std::size_t k = 0;; ++k) {
    double total = 0.0;
    for (double a : alpha) total += a;
    if (total <= 0.0) return kNegInf;
    for (double& a : alpha) a /= total;
    log_scale += std::log(total);
    if (k + 1 == value.size()) break;
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t s = 0; s < n; ++s) {
      if (alpha[s] == 0.0) continue;
      for (const auto& e : machine.edges(s)) next[e.to] += alpha[s] * e.probability;
    }
    auto c = static_cast<unsigned char>(value[k + 1]);
    for (std::size_t s = 0; s < n; ++s) next[s] *= machine.emission(s, c);
    alpha.swap(next);
  }
  double end = 0.0;
  for (std::size_t s = 0; s < n; ++s) end += alpha[s] * machine.stop(s);
  if (end <= 0.0) return kNegInf;
  return log_scale + std::log(end);
}

}  // namespace wrangle
