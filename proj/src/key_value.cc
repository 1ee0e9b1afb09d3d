#include "blockmodel/key_value.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "blockmodel/edge_list_io.h"

namespace blockmodel {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Largest i + 1 over keys of the form prefix + i + ".rest".
std::size_t count_indexed(const KeyValues& kv, const std::string& prefix) {
  std::size_t count = 0;
  for (const auto& [key, value] : kv.entries()) {
    if (key.rfind(prefix, 0) != 0) continue;
    const auto dot = key.find('.', prefix.size());
    const std::string index = key.substr(prefix.size(), dot - prefix.size());
    std::size_t i = 0;
    auto [ptr, ec] = std::from_chars(index.data(), index.data() + index.size(), i);
    if (ec != std::errc() || ptr != index.data() + index.size() || dot == std::string::npos) {
      throw std::invalid_argument(kv.source() + ": malformed key '" + key + "'");
    }
    count = std::max(count, i + 1);
  }
  return count;
}

PriorFamily parse_family(const KeyValues& kv, const std::string& key, const std::string& value) {
  if (value == "powerlaw") return PriorFamily::kPowerLaw;
  if (value == "poisson") return PriorFamily::kPoisson;
  throw std::invalid_argument(kv.source() + ": " + key + " must be 'powerlaw' or 'poisson', got '" + value + "'");
}

std::string family_text(PriorFamily f) { return f == PriorFamily::kPoisson ? "poisson" : "powerlaw"; }

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

BlockPrior read_block_prior(const KeyValues& kv, const std::string& base, BlockPrior prior) {
  if (auto f = kv.get_string(base + "family")) prior.family = parse_family(kv, base + "family", *f);
  if (auto x = kv.get_double(base + "alpha")) prior.alpha = *x;
  if (auto x = kv.get_double(base + "beta")) prior.beta = *x;
  if (auto x = kv.get_double(base + "mean")) prior.mean = *x;
  if (auto x = kv.get_double(base + "theta_min")) prior.theta_min = *x;
  if (auto x = kv.get_double(base + "theta_max")) prior.theta_max = *x;
  if (prior.alpha && !(*prior.alpha > 1.0)) throw std::invalid_argument(kv.source() + ": " + base + "alpha must exceed 1");
  if (prior.beta && !(*prior.beta >= 0.0 && *prior.beta <= 1.0)) {
    throw std::invalid_argument(kv.source() + ": " + base + "beta must lie in [0, 1]");
  }
  if (prior.mean && !(*prior.mean >= 0.0)) throw std::invalid_argument(kv.source() + ": " + base + "mean must be non-negative");
  if (!(prior.theta_min > 0.0 && prior.theta_max > prior.theta_min)) {
    throw std::invalid_argument(kv.source() + ": " + base + "needs 0 < theta_min < theta_max");
  }
  return prior;
}

}  // namespace

void KeyValues::fail(const std::string& key, const std::string& what) const {
  throw std::invalid_argument(source_ + ": " + key + " " + what + ", got '" + entries_.at(key) + "'");
}

std::optional<std::string> KeyValues::get_string(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  used_.insert(key);
  return it->second;
}

std::optional<double> KeyValues::get_double(const std::string& key) const {
  const auto s = get_string(key);
  if (!s) return std::nullopt;
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), x);
  if (ec != std::errc() || ptr != s->data() + s->size() || std::isnan(x)) fail(key, "must be a number");
  return x;
}

std::optional<long long> KeyValues::get_int(const std::string& key) const {
  const auto s = get_string(key);
  if (!s) return std::nullopt;
  long long x = 0;
  auto [ptr, ec] = std::from_chars(s->data(), s->data() + s->size(), x);
  if (ec != std::errc() || ptr != s->data() + s->size()) fail(key, "must be an integer");
  return x;
}

std::optional<bool> KeyValues::get_bool(const std::string& key) const {
  const auto s = get_string(key);
  if (!s) return std::nullopt;
  if (*s == "true" || *s == "1" || *s == "yes") return true;
  if (*s == "false" || *s == "0" || *s == "no") return false;
  fail(key, "must be true or false");
}

void KeyValues::reject_unused() const {
  std::string unknown;
  for (const auto& [key, value] : entries_) {
    if (!used_.contains(key)) unknown += (unknown.empty() ? "" : ", ") + key;
  }
  if (!unknown.empty()) throw std::invalid_argument(source_ + ": unknown keys: " + unknown);
}

KeyValues parse_key_values(std::istream& in, const std::string& source) {
  KeyValues kv(source);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(source, lineno, "expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(source, lineno, "empty key");
    if (kv.contains(key)) throw ParseError(source, lineno, "duplicate key '" + key + "'");
    kv.set(key, value);
  }
  return kv;
}

KeyValues read_key_values_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_key_values(in, path);
}

SynthSpec synth_spec_from(const KeyValues& kv) {
  SynthSpec spec;
  if (auto n = kv.get_int("n")) {
    if (*n < 2 || *n > 100'000'000) throw std::invalid_argument(kv.source() + ": n out of range");
    spec.n = static_cast<VertexId>(*n);
  }
  if (auto d = kv.get_bool("directed")) spec.directed = *d;
  if (auto l = kv.get_double("lambda")) spec.lambda = *l;
  if (auto w = kv.get_double("omega12")) spec.omega12 = *w;
  if (auto t = kv.get_string("directed_theta")) {
    if (*t != "independent" && *t != "shared") {
      throw std::invalid_argument(kv.source() + ": directed_theta must be independent or shared, got '" + *t + "'");
    }
    spec.shared_theta = *t == "shared";
  }

  if (const std::size_t k = count_indexed(kv, "block."); k > 0) {
    spec.blocks.resize(k);
    spec.fractions.assign(k, 1.0 / static_cast<double>(k));
    for (std::size_t r = 0; r < k; ++r) {
      const std::string base = "block." + std::to_string(r) + ".";
      auto& b = spec.blocks[r];
      if (auto f = kv.get_double(base + "fraction")) spec.fractions[r] = *f;
      if (auto f = kv.get_string(base + "family")) b.family = parse_family(kv, base + "family", *f);
      if (auto x = kv.get_double(base + "alpha")) b.alpha = *x;
      if (auto x = kv.get_double(base + "theta_min")) b.theta_min = *x;
      if (auto x = kv.get_double(base + "theta_max")) b.theta_max = *x;
      if (auto x = kv.get_double(base + "mean")) b.mean = *x;
      if (auto t = kv.get_string(base + "theta")) {
        if (*t == "constant") {
          b.poisson_theta = PoissonTheta::kConstant;
        } else if (*t == "poisson") {
          b.poisson_theta = PoissonTheta::kDrawn;
        } else {
          throw std::invalid_argument(kv.source() + ": " + base + "theta must be constant or poisson, got '" + *t + "'");
        }
      }
    }
  }
  validate(spec);
  return spec;
}

std::optional<DegreePriorSet> degree_priors_from(const KeyValues& kv, const std::string& prefix) {
  const std::size_t k = count_indexed(kv, prefix + "block.");
  const std::size_t k_in = count_indexed(kv, prefix + "in.block.");
  if (k == 0 && k_in == 0) return std::nullopt;
  DegreePriorSet set;
  for (std::size_t r = 0; r < std::max(k, k_in); ++r) {
    const BlockPrior p = read_block_prior(kv, prefix + "block." + std::to_string(r) + ".", BlockPrior{});
    set.total.push_back(p);
    set.out.push_back(p);
    set.in.push_back(read_block_prior(kv, prefix + "in.block." + std::to_string(r) + ".", p));
  }
  return set;
}

std::string to_key_values(const SynthSpec& spec) {
  std::ostringstream os;
  os << "n = " << spec.n << '\n'
     << "directed = " << (spec.directed ? "true" : "false") << '\n'
     << "lambda = " << format_double(spec.lambda) << '\n';
  if (spec.omega12) os << "omega12 = " << format_double(*spec.omega12) << '\n';
  if (spec.directed) os << "directed_theta = " << (spec.shared_theta ? "shared" : "independent") << '\n';
  for (std::size_t r = 0; r < spec.blocks.size(); ++r) {
    const auto& b = spec.blocks[r];
    const std::string base = "block." + std::to_string(r) + ".";
    os << base << "fraction = " << format_double(spec.fractions[r]) << '\n'
       << base << "family = " << family_text(b.family) << '\n';
    if (b.family == PriorFamily::kPowerLaw) {
      os << base << "alpha = " << format_double(b.alpha) << '\n'
         << base << "theta_max = " << format_double(b.theta_max) << '\n';
      if (b.theta_min) os << base << "theta_min = " << format_double(*b.theta_min) << '\n';
    } else {
      os << base << "theta = " << (b.poisson_theta == PoissonTheta::kConstant ? "constant" : "poisson") << '\n';
    }
    os << base << "mean = " << format_double(b.mean) << '\n';
  }
  return os.str();
}

}  // namespace blockmodel
