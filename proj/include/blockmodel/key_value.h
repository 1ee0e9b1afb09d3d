#pragma once

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "blockmodel/degree_prior.h"
#include "blockmodel/synth.h"

namespace blockmodel {

/// `key = value` lines with `#` comments. Getters record which keys were
/// read so that leftovers (typos) can be reported.
class KeyValues {
 public:
  KeyValues() = default;
  explicit KeyValues(std::string source) : source_(std::move(source)) {}

  void set(const std::string& key, const std::string& value) { entries_[key] = value; }
  bool contains(const std::string& key) const { return entries_.contains(key); }
  const std::map<std::string, std::string>& entries() const { return entries_; }
  const std::string& source() const { return source_; }

  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<long long> get_int(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;

  /// Throws std::invalid_argument naming keys that no getter has read.
  void reject_unused() const;

 private:
  [[noreturn]] void fail(const std::string& key, const std::string& what) const;

  std::string source_ = "<config>";
  std::map<std::string, std::string> entries_;
  mutable std::set<std::string> used_;
};

KeyValues parse_key_values(std::istream& in, const std::string& source = "<config>");
KeyValues read_key_values_file(const std::string& path);

/// Keys: n, directed, lambda, omega12, and per block i
/// block.i.{fraction,family,alpha,theta_min,theta_max,mean}. Keys starting
/// with `prior.` are left for degree_priors_from.
SynthSpec synth_spec_from(const KeyValues& kv);

/// Keys under `prefix`: block.i.{family,alpha,beta,mean,theta_min,theta_max}
/// set the total and out priors; in.block.i.* override the in priors, which
/// otherwise copy the out priors. Returns nullopt when no such key exists.
std::optional<DegreePriorSet> degree_priors_from(const KeyValues& kv, const std::string& prefix = "");

/// Key-value echo of a spec in the format synth_spec_from reads.
std::string to_key_values(const SynthSpec& spec);

}  // namespace blockmodel
