#include "random_store.hpp"

#include <map>
#include <set>

namespace panoptica::testing {

namespace {

template <typename T>
T pick(Rng& rng, T lo, T hi) {
  return std::uniform_int_distribution<T>(lo, hi)(rng);
}

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string random_word(Rng& rng) {
  static const char* kWords[] = {"alpha", "Beta", "gamma", "Delta", "cio", "Pink", "opera",
                                 "Role",  "x",    "",      "zeta",  "Cio-Cio"};
  std::string out = kWords[pick<std::size_t>(rng, 0, std::size(kWords) - 1)];
  if (chance(rng, 0.5)) out += " " + std::to_string(pick(rng, 0, 20));
  return out;
}

Value random_scalar(Rng& rng, Kind kind) {
  switch (kind) {
    case Kind::text: return random_word(rng);
    case Kind::integer: return std::int64_t{pick(rng, -5, 5)};
    case Kind::decimal: return static_cast<double>(pick(rng, -40, 40)) / 4.0;
    case Kind::date: return Date{pick(rng, 1990, 1992), pick(rng, 1, 12), pick(rng, 1, 28)};
    case Kind::boolean: return chance(rng, 0.5);
    case Kind::link: break;
  }
  return std::string("?");
}

std::optional<ObjectId> random_object_of(const Store& store, Rng& rng, const std::string& cls) {
  const auto ids = store.objects_of(cls);
  if (ids.empty()) return std::nullopt;
  return ids[pick<std::size_t>(rng, 0, ids.size() - 1)];
}

std::optional<ObjectId> random_object(const Store& store, Rng& rng) {
  if (store.size() == 0) return std::nullopt;
  auto it = store.records().begin();
  std::advance(it, pick<std::size_t>(rng, 0, store.size() - 1));
  return it->first;
}

}  // namespace

Vocabulary random_vocabulary(Rng& rng, int max_classes) {
  Vocabulary v;
  v.name = "random";
  const int n = pick(rng, 1, max_classes);
  const Kind scalar_kinds[] = {Kind::text, Kind::integer, Kind::decimal, Kind::date,
                               Kind::boolean};
  for (int c = 0; c < n; ++c) {
    const std::string name = "C" + std::to_string(c);
    v = create_class(v, name, false);
    v = add_attribute(v, name, AttributeDef{"name", Kind::text, {}, true});
  }
  for (int c = 0; c < n; ++c) {
    const std::string name = "C" + std::to_string(c);
    const int scalars = pick(rng, 0, 2);
    for (int s = 0; s < scalars; ++s) {
      const Kind k = scalar_kinds[pick(rng, 0, 4)];
      v = add_attribute(v, name, AttributeDef{"s" + std::to_string(s), k, {}, false});
    }
    const int links = pick(rng, 0, 3);
    for (int l = 0; l < links; ++l) {
      const int target = pick(rng, 0, n - 1);
      // Required links only point at earlier classes so objects stay insertable.
      const bool required = target < c && chance(rng, 0.3);
      v = add_attribute(v, name,
                        AttributeDef{"l" + std::to_string(l), Kind::link,
                                     "C" + std::to_string(target), required});
    }
  }
  if (n >= 2 && chance(rng, 0.4)) {
    const std::vector<std::string> participants = {"C" + std::to_string(pick(rng, 0, n - 1)),
                                                   "C" + std::to_string(pick(rng, 0, n - 1))};
    v = create_relationship(v, "Rel", participants, {});
    if (chance(rng, 0.3)) v = set_key_unique(v, "Rel", false);
  }
  return v;
}

OpStats random_operations(Store& store, Rng& rng, int steps, std::size_t max_objects) {
  OpStats stats;
  const Vocabulary& vocab = store.vocabulary();
  for (int step = 0; step < steps; ++step) {
    ++stats.attempted;
    try {
      const int op = pick(rng, 0, 9);
      if (op <= 4 && store.size() < max_objects) {
        const ClassDef& cls = vocab.classes[pick<std::size_t>(rng, 0, vocab.classes.size() - 1)];
        Values values;
        for (const auto& a : cls.attributes) {
          if (!a.required && chance(rng, 0.4)) continue;
          if (a.is_link()) {
            if (auto t = random_object_of(store, rng, a.target_class)) values.emplace(a.name, *t);
          } else if (!(cls.is_intermediate && a.name == kKeyLabel)) {
            values.emplace(a.name, random_scalar(rng, a.kind));
          }
        }
        store.insert(cls.name, std::move(values));
      } else if (op <= 7) {
        auto id = random_object(store, rng);
        if (!id) continue;
        const ClassDef& cls = store.class_of(*id);
        const AttributeDef& a = cls.attributes[pick<std::size_t>(rng, 0, cls.attributes.size() - 1)];
        Patch patch;
        if (chance(rng, 0.2)) {
          patch.emplace(a.name, std::nullopt);
        } else if (a.is_link()) {
          // Self links and arbitrary (possibly wrong-class) targets included.
          std::optional<ObjectId> target =
              chance(rng, 0.1) ? random_object(store, rng) : random_object_of(store, rng, a.target_class);
          if (!target) continue;
          patch.emplace(a.name, *target);
        } else {
          patch.emplace(a.name, random_scalar(rng, a.kind));
        }
        store.update(*id, patch);
      } else {
        auto id = random_object(store, rng);
        if (!id) continue;
        store.remove(*id, chance(rng, 0.5));
      }
      ++stats.succeeded;
    } catch (const Error&) {
    }
  }
  return stats;
}

Store random_store(Rng& rng, int steps) {
  Store store(random_vocabulary(rng));
  random_operations(store, rng, steps);
  return store;
}

std::size_t brute_force_authority(const Store& store, ObjectId target) {
  std::size_t n = 0;
  for (const auto& [id, record] : store.records()) {
    for (const auto& [name, value] : record.values) {
      if (kind_of(value) == Kind::link && std::get<ObjectId>(value) == target) ++n;
    }
  }
  return n;
}

std::string brute_force_mirror_check(const Store& store) {
  std::map<ObjectId, std::set<LinkSource>> expected_backward;
  for (const auto& [id, record] : store.records()) {
    for (const auto& [name, value] : record.values) {
      if (kind_of(value) != Kind::link) continue;
      const ObjectId target = std::get<ObjectId>(value);
      if (!store.contains(target)) return "record #" + std::to_string(id.value) + " dangles";
      if (store.link_target(id, name) != target) {
        return "forward entry missing for #" + std::to_string(id.value) + "." + name;
      }
      expected_backward[target].insert(LinkSource{id, name});
    }
    const ClassDef& cls = store.class_of(id);
    for (const auto& a : cls.attributes) {
      if (a.is_link() && !record.get(a.name) && store.link_target(id, a.name)) {
        return "stale forward entry for #" + std::to_string(id.value) + "." + a.name;
      }
    }
  }
  for (const auto& [id, record] : store.records()) {
    const auto& actual = store.backward(id);
    auto it = expected_backward.find(id);
    const std::set<LinkSource> expected =
        it == expected_backward.end() ? std::set<LinkSource>{} : it->second;
    if (actual != expected) return "backward set of #" + std::to_string(id.value) + " differs";
  }
  for (std::uint64_t raw = 1; raw < store.next_id(); ++raw) {
    const ObjectId id{raw};
    if (!store.contains(id) && !store.backward(id).empty()) {
      return "deleted #" + std::to_string(raw) + " still has backward entries";
    }
  }
  return {};
}

}  // namespace panoptica::testing
