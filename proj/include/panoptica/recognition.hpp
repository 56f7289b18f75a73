#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "panoptica/vocabulary.hpp"

namespace panoptica {

/// Exact non-negative fraction, always reduced. Scores are compared exactly
/// so that ties are real ties.
struct Ratio {
  std::int64_t num = 0;
  std::int64_t den = 1;

  static Ratio of(std::int64_t num, std::int64_t den);
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }

  friend bool operator==(const Ratio& a, const Ratio& b) { return a.num == b.num && a.den == b.den; }
  friend std::strong_ordering operator<=>(const Ratio& a, const Ratio& b) {
    return a.num * b.den <=> b.num * a.den;
  }
};

/// Attributes perceived on an unknown object, optionally with sample values.
struct Perception {
  std::vector<std::string> attribute_names;
  std::map<std::string, std::vector<std::string>> samples;
};

struct ClassMatch {
  std::string class_name;
  Ratio score;
  Ratio name_score;
  Ratio value_compat;
  std::set<std::string> matched;           // normalized names
  std::set<std::string> missing_required;  // normalized names
};

/// Whether `label` is the label of some known object of `class_name`.
using LabelLookup = std::function<bool(std::string_view class_name, std::string_view label)>;

// score = kNameWeight * name_score + kValueWeight * value_compat
inline constexpr Ratio kNameWeight{4, 5};
inline constexpr Ratio kValueWeight{1, 5};

/// Lowercase, trim, and collapse internal whitespace runs to "_".
std::string normalize_name(std::string_view name);

bool sample_compatible(const AttributeDef& attr, std::string_view sample,
                       const LabelLookup& labels = {});

/// Ranks classes by how well their attribute set matches the perception.
/// Classes with no matched attribute are omitted. Throws EmptyPerception.
std::vector<ClassMatch> classify(const Vocabulary& vocab, const Perception& perception,
                                 const LabelLookup& labels = {});

std::string match_report(const ClassMatch& match);

Json to_json(const ClassMatch& match);

}  // namespace panoptica
