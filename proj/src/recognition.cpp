#include "panoptica/recognition.hpp"

#include <algorithm>
#include <cstdio>
#include <numeric>

namespace panoptica {

Ratio Ratio::of(std::int64_t num, std::int64_t den) {
  if (den == 0) return Ratio{0, 1};
  const std::int64_t g = std::gcd(num, den);
  return Ratio{num / g, den / g};
}

std::string normalize_name(std::string_view name) {
  const std::string lowered = ascii_lower(trim(name));
  std::string out;
  bool in_space = false;
  for (char c : lowered) {
    const bool space = c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
    if (space) {
      in_space = true;
      continue;
    }
    if (in_space) out.push_back('_');
    in_space = false;
    out.push_back(c);
  }
  return out;
}

bool sample_compatible(const AttributeDef& attr, std::string_view sample,
                       const LabelLookup& labels) {
  const std::string value = trim(sample);
  if (attr.is_link()) {
    if (parse_value(Kind::link, value)) return true;
    return labels && labels(attr.target_class, value);
  }
  if (attr.kind == Kind::text) return true;
  return parse_value(attr.kind, value).has_value();
}

std::vector<ClassMatch> classify(const Vocabulary& vocab, const Perception& perception,
                                 const LabelLookup& labels) {
  std::set<std::string> perceived;
  for (const auto& name : perception.attribute_names) {
    std::string n = normalize_name(name);
    if (!n.empty()) perceived.insert(std::move(n));
  }
  if (perceived.empty()) throw Error(ErrorCode::EmptyPerception, "no attribute names perceived");

  std::map<std::string, std::vector<std::string>> samples;
  for (const auto& [name, values] : perception.samples) {
    auto& bucket = samples[normalize_name(name)];
    bucket.insert(bucket.end(), values.begin(), values.end());
  }

  struct Ranked {
    ClassMatch match;
    std::size_t position;
  };
  std::vector<Ranked> ranked;

  for (std::size_t pos = 0; pos < vocab.classes.size(); ++pos) {
    const ClassDef& cls = vocab.classes[pos];
    std::map<std::string, const AttributeDef*> by_norm;
    for (const auto& attr : cls.attributes) by_norm.emplace(normalize_name(attr.name), &attr);

    ClassMatch match;
    match.class_name = cls.name;
    std::size_t union_size = by_norm.size();
    for (const auto& name : perceived) {
      if (by_norm.count(name)) {
        match.matched.insert(name);
      } else {
        ++union_size;
      }
    }
    for (const auto& attr : cls.attributes) {
      const std::string n = normalize_name(attr.name);
      if (attr.required && !perceived.count(n)) match.missing_required.insert(n);
    }
    if (match.matched.empty()) continue;

    std::int64_t compatible = 0;
    for (const auto& name : match.matched) {
      const AttributeDef* attr = by_norm.at(name);
      auto it = samples.find(name);
      const bool ok = it == samples.end() ||
                      std::all_of(it->second.begin(), it->second.end(), [&](const auto& s) {
                        return sample_compatible(*attr, s, labels);
                      });
      if (ok) ++compatible;
    }

    const auto matched = static_cast<std::int64_t>(match.matched.size());
    const auto united = static_cast<std::int64_t>(union_size);
    match.name_score = Ratio::of(matched, united);
    match.value_compat = Ratio::of(compatible, matched);
    // 4/5 * m/u + 1/5 * c/k  ==  (4*m*k + c*u) / (5*u*k)
    match.score = Ratio::of(kNameWeight.num * kValueWeight.den * matched * matched +
                                kValueWeight.num * kNameWeight.den * compatible * united,
                            kNameWeight.den * kValueWeight.den * united * matched);
    ranked.push_back({std::move(match), pos});
  }

  std::stable_sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.match.score != b.match.score) return a.match.score > b.match.score;
    if (a.match.missing_required.size() != b.match.missing_required.size()) {
      return a.match.missing_required.size() < b.match.missing_required.size();
    }
    return a.position < b.position;
  });

  std::vector<ClassMatch> out;
  out.reserve(ranked.size());
  for (auto& r : ranked) out.push_back(std::move(r.match));
  return out;
}

namespace {

std::string fixed3(const Ratio& r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", r.value());
  return buf;
}

std::string join(const std::set<std::string>& names) {
  std::string out;
  for (const auto& n : names) {
    if (!out.empty()) out += ',';
    out += n;
  }
  return out;
}

}  // namespace

std::string match_report(const ClassMatch& match) {
  return match.class_name + " score=" + fixed3(match.score) + " matched=[" +
         join(match.matched) + "] missing_required=[" + join(match.missing_required) +
         "] value_compat=" + fixed3(match.value_compat);
}

Json to_json(const ClassMatch& match) {
  Json j;
  j["class"] = match.class_name;
  j["score"] = match.score.value();
  j["name_score"] = match.name_score.value();
  j["value_compat"] = match.value_compat.value();
  j["matched"] = match.matched;
  j["missing_required"] = match.missing_required;
  j["report"] = match_report(match);
  return j;
}

}  // namespace panoptica
