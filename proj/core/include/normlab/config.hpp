#pragma once

#include "normlab/scalar.hpp"

#include <cstdint>
#include <optional>
#include <string>

namespace normlab {

/// Config file error carrying a 1-based line number (0 = whole file).
class config_error : public std::runtime_error {
 public:
  config_error(std::string message, std::size_t line = 0)
      : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Flat key = value experiment description ('#' starts a comment; keys are
/// fixed; unknown keys are errors, not warnings). canonical() prints the set
/// keys in a fixed order, and parsing that string reproduces the config.
struct ExperimentConfig {
  std::string command;  // construct|discretize|nikolskii|witness|frames|phase|reproduce
  std::optional<std::string> family;    // l1|rademacher|infinite
  std::optional<std::string> target;    // t21|p32|p33|l46|t47|s5
  std::optional<unsigned> n;
  std::optional<unsigned> inv_eps;
  std::optional<unsigned> N;
  std::optional<Scalar> p;
  std::optional<unsigned> K;
  std::optional<std::string> strategy;  // uniform|random|greedy
  std::optional<std::size_t> M;
  std::optional<unsigned> budget;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::optional<std::string> backend;   // exact|float64
  std::optional<std::string> out;
  std::optional<Rational> A_param;

  static ExperimentConfig parse_string(const std::string& text);
  static ExperimentConfig parse_file(const std::string& path);

  std::string canonical() const;

  std::uint64_t seed_or(std::uint64_t fallback) const { return seed.value_or(fallback); }
  unsigned budget_or(unsigned fallback) const { return budget.value_or(fallback); }
};

}  // namespace normlab
