#include "normlab/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace normlab {

namespace {

const char* const kCommands[] = {"construct", "discretize", "nikolskii", "witness",
                                 "frames",    "phase",      "reproduce"};

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

unsigned parse_unsigned(const std::string& v, std::size_t line) {
  unsigned out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw config_error("expected a nonnegative integer, got '" + v + "'", line);
  return out;
}

std::uint64_t parse_u64(const std::string& v, std::size_t line) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size())
    throw config_error("expected an unsigned integer, got '" + v + "'", line);
  return out;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse_string(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  bool saw_command = false;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw config_error("expected key = value", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw config_error("empty key or value", line_no);

    if (key == "command") {
      bool known = false;
      for (const char* c : kCommands) known = known || value == c;
      if (!known) throw config_error("unknown command '" + value + "'", line_no);
      cfg.command = value;
      saw_command = true;
    } else if (key == "family") {
      if (value != "l1" && value != "rademacher" && value != "infinite")
        throw config_error("unknown family '" + value + "'", line_no);
      cfg.family = value;
    } else if (key == "target") {
      cfg.target = value;
    } else if (key == "n") {
      cfg.n = parse_unsigned(value, line_no);
    } else if (key == "inv_eps") {
      cfg.inv_eps = parse_unsigned(value, line_no);
    } else if (key == "N") {
      cfg.N = parse_unsigned(value, line_no);
    } else if (key == "p") {
      try {
        cfg.p = Scalar::parse(value);
      } catch (const std::invalid_argument&) {
        throw config_error("cannot parse p = '" + value + "'", line_no);
      }
    } else if (key == "K") {
      cfg.K = parse_unsigned(value, line_no);
    } else if (key == "strategy") {
      if (value != "uniform" && value != "random" && value != "greedy")
        throw config_error("unknown strategy '" + value + "'", line_no);
      cfg.strategy = value;
    } else if (key == "M") {
      cfg.M = parse_u64(value, line_no);
    } else if (key == "budget") {
      cfg.budget = parse_unsigned(value, line_no);
    } else if (key == "seed") {
      cfg.seed = parse_u64(value, line_no);
    } else if (key == "threads") {
      cfg.threads = parse_unsigned(value, line_no);
    } else if (key == "backend") {
      if (value != "exact" && value != "float64")
        throw config_error("backend must be exact or float64", line_no);
      cfg.backend = value;
    } else if (key == "out") {
      cfg.out = value;
    } else if (key == "A_param") {
      try {
        cfg.A_param = rat_from_string(value);
      } catch (const std::invalid_argument&) {
        throw config_error("cannot parse A_param = '" + value + "'", line_no);
      }
    } else {
      throw config_error("unknown key '" + key + "'", line_no);
    }
  }
  if (!saw_command) throw config_error("missing required key 'command'");
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_string(buffer.str());
}

std::string ExperimentConfig::canonical() const {
  std::ostringstream out;
  out << "command = " << command << "\n";
  if (target) out << "target = " << *target << "\n";
  if (family) out << "family = " << *family << "\n";
  if (n) out << "n = " << *n << "\n";
  if (inv_eps) out << "inv_eps = " << *inv_eps << "\n";
  if (N) out << "N = " << *N << "\n";
  if (p) out << "p = " << p->to_string() << "\n";
  if (K) out << "K = " << *K << "\n";
  if (A_param) out << "A_param = " << rat_to_string(*A_param) << "\n";
  if (strategy) out << "strategy = " << *strategy << "\n";
  if (M) out << "M = " << *M << "\n";
  if (budget) out << "budget = " << *budget << "\n";
  if (seed) out << "seed = " << *seed << "\n";
  if (threads) out << "threads = " << *threads << "\n";
  if (backend) out << "backend = " << *backend << "\n";
  if (this->out) out << "out = " << *this->out << "\n";
  return out.str();
}

}  // namespace normlab
