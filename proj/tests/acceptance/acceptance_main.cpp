// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "panoptica/ingest.hpp"
#include "panoptica/recognition.hpp"
#include "panoptica/reports.hpp"
#include "panoptica/traversal.hpp"
#include "support/classify_oracle.hpp"
#include "support/fixtures.hpp"
#include "support/random_store.hpp"
#include "support/sqlite_replay.hpp"

using namespace panoptica;
using testing::Rng;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    if (pass) detail = why;
    pass = false;
  }
};

// ---------------------------------------------------------------------------

Outcome opera_scenario() {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();

  Vocabulary v;
  v.name = "opera";
  v = create_class(v, "Opera Works", false);
  v = add_attribute(v, "Opera Works", {"title", Kind::text, {}, true});
  v = add_attribute(v, "Opera Works", {"composer", Kind::text, {}, false});
  for (const char* cls : {"Roles", "Small Roles", "Silent Roles", "Choir", "Orchestra Cast", "Scenic Music"}) {
    v = create_class(v, cls, false);
    v = add_attribute(v, cls, {"name", Kind::text, {}, true});
    v = add_attribute(v, cls, {"opera", Kind::link, "Opera Works", true});
  }
  require_valid(v);
  Store s(v);
  auto opera = [&](const char* title) { return s.insert("Opera Works", {{"title", std::string(title)}}); };
  const ObjectId dg = opera("Don Giovanni");
  const ObjectId fi = opera("Fidelio");
  const ObjectId fw = opera("Figaro's wedding");
  const ObjectId mb = opera("Madame Butterfly");
  auto dep = [&](const char* cls, const char* name, ObjectId op) {
    s.insert(cls, {{"name", std::string(name)}, {"opera", op}});
  };
  dep("Roles", "F. B. Pinkerton", mb);
  dep("Roles", "Cio-Cio-San", mb);
  dep("Small Roles", "Cio-Cio-San's mother", mb);
  dep("Small Roles", "Bonze", mb);
  dep("Silent Roles", "Dolore", mb);
  dep("Choir", "Female Choir", mb);
  dep("Roles", "Don Giovanni", dg);
  dep("Orchestra Cast", "Mandolin", dg);
  dep("Scenic Music", "Stage Band", dg);
  dep("Roles", "Leonore", fi);
  dep("Choir", "Prisoners' Chorus", fi);
  dep("Roles", "Susanna", fw);

  Session session;
  const ViewModel view = focus(s, session, mb);
  const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<std::pair<std::string, std::vector<std::string>>> got;
  for (const auto& g : view.d4_context) {
    std::vector<std::string> names;
    for (const auto& m : g.members) names.push_back(m.label);
    got.emplace_back(g.class_name, names);
  }
  const std::vector<std::pair<std::string, std::vector<std::string>>> want = {
      {"Roles", {"Cio-Cio-San", "F. B. Pinkerton"}},
      {"Small Roles", {"Bonze", "Cio-Cio-San's mother"}},
      {"Silent Roles", {"Dolore"}},
      {"Choir", {"Female Choir"}},
  };
  if (got != want) o.fail("d4 groups differ from the expected four");
  if (elapsed >= 1.0) o.fail("took " + std::to_string(elapsed) + " s");
  if (o.pass) {
    std::ostringstream d;
    d.precision(3);
    d << std::fixed << "4 groups, 6 members exact, " << elapsed * 1000 << " ms";
    o.detail = d.str();
  }
  return o;
}

// ---------------------------------------------------------------------------

Outcome mirror_property() {
  Outcome o;
  std::size_t ops = 0, applied = 0, max_objects = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    Rng rng(1'000'000 + seed);
    Store s(testing::random_vocabulary(rng, 5));
    const auto stats = testing::random_operations(s, rng, 500, 200);
    ops += stats.attempted;
    applied += stats.succeeded;
    max_objects = std::max(max_objects, s.size());
    if (!s.integrity_check().empty()) o.fail("integrity violation, seed " + std::to_string(seed));
    const std::string mirror = testing::brute_force_mirror_check(s);
    if (!mirror.empty()) o.fail(mirror + ", seed " + std::to_string(seed));
  }
  if (o.pass) {
    o.detail = "1000 sequences, " + std::to_string(applied) + "/" + std::to_string(ops) +
               " operations applied, largest store " + std::to_string(max_objects) + ", 0 violations";
  }
  return o;
}

// ---------------------------------------------------------------------------

// A session with random filters and anchors over the store.
Session random_session(const Store& s, Rng& rng) {
  Session session;
  for (const auto& cls : s.vocabulary().classes) {
    if (rng() % 3 == 0 && cls.find("name")) {
      static const char* needles[] = {"a", "cio", "1", "zz"};
      set_filter(s, session, Filter{cls.name, {Clause{"name", predicate::Contains{needles[rng() % 4]}}}});
    }
    const auto ids = s.objects_of(cls.name);
    if (!ids.empty() && rng() % 4 == 0) set_anchor(s, session, cls.name, ids[rng() % ids.size()]);
  }
  return session;
}

Outcome no_dead_end() {
  Outcome o;
  std::size_t views = 0, follows = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(2'000'000 + seed);
    const Store s = testing::random_store(rng, 200);
    const Session base = rng() % 2 ? random_session(s, rng) : Session{};
    for (const auto& [id, rec] : s.records()) {
      Session session = base;
      select_class(s, session, s.vocabulary().classes[rng() % s.vocabulary().classes.size()].name);
      const ViewModel v = focus(s, session, id);
      ++views;
      auto resolves = [&](ObjectId x) {
        if (!s.contains(x)) o.fail("unresolvable id " + std::to_string(x.value) + ", seed " + std::to_string(seed));
      };
      for (const auto& e : v.d2_objects) resolves(e.id);
      resolves(v.focus->id);
      for (const auto& a : v.d3_attributes) {
        if (a.target) resolves(a.target->id);
      }
      for (const auto& g : v.d4_context) {
        for (const auto& m : g.members) resolves(m.id);
      }
      for (const auto& g : v.d5_group_attributes) {
        for (const auto& r : g.rows) resolves(r.id);
      }
      try {
        for (const auto& a : v.d3_attributes) {
          if (!a.target) continue;
          Session copy = session;
          follow(s, copy, id, a.attribute);
          ++follows;
        }
        for (const auto& g : v.d4_context) {
          for (const auto& m : g.members) {
            Session copy = session;
            follow(s, copy, id, m.id);
            ++follows;
          }
        }
      } catch (const Error& e) {
        o.fail(std::string("follow failed: ") + e.what() + ", seed " + std::to_string(seed));
      }
    }
  }
  if (o.pass) {
    o.detail = "100 stores, " + std::to_string(views) + " views, " + std::to_string(follows) +
               " follows, 0 failures";
  }
  return o;
}

// ---------------------------------------------------------------------------

Outcome round_trip() {
  Outcome o;
  std::size_t links = 0, ok = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(3'000'000 + seed);
    const Store s = testing::random_store(rng, 200);
    for (const auto& [src, rec] : s.records()) {
      for (const auto& attr : s.class_of(src).attributes) {
        if (!attr.is_link()) continue;
        auto target = s.link_target(src, attr.name);
        if (!target) continue;
        ++links;
        Session session;
        focus(s, session, src);
        const ViewModel there = follow(s, session, src, attr.name);
        if (there.focus->id != *target) continue;
        bool listed = false;
        for (const auto& g : there.d4_context) {
          if (g.class_name != rec.class_name || g.attribute != attr.name) continue;
          for (const auto& m : g.members) listed = listed || m.id == src;
        }
        if (!listed) continue;
        const ViewModel back = follow(s, session, *target, src);
        if (back.focus->id == src) ++ok;
      }
    }
  }
  if (ok != links) o.fail(std::to_string(ok) + "/" + std::to_string(links) + " links round-tripped");
  else o.detail = std::to_string(links) + "/" + std::to_string(links) + " links (100%)";
  return o;
}

// ---------------------------------------------------------------------------

Outcome authority_oracle() {
  Outcome o;
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(4'000'000 + seed);
    const Store s = testing::random_store(rng, 200);
    for (const auto& [id, rec] : s.records()) {
      ++checked;
      if (s.authority(id) != testing::brute_force_authority(s, id)) {
        o.fail("mismatch on #" + std::to_string(id.value) + ", seed " + std::to_string(seed));
      }
    }
  }
  if (o.pass) o.detail = std::to_string(checked) + " objects over 100 stores, exact";
  return o;
}

// ---------------------------------------------------------------------------

Outcome classify_oracle() {
  Outcome o;
  std::size_t ties = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    Rng rng(5'000'000 + seed);
    const auto c = testing::random_classify_case(rng);
    const auto ranked = classify(c.vocab, c.perception);
    std::vector<std::string> got;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
      got.push_back(ranked[i].class_name);
      if (i > 0 && ranked[i].score == ranked[i - 1].score) ++ties;
    }
    if (got != testing::oracle_ranking(c.vocab, c.perception)) {
      o.fail("ranking differs, seed " + std::to_string(seed));
    }
  }
  if (o.pass) o.detail = "500 instances exact, " + std::to_string(ties) + " tied neighbours resolved identically";
  return o;
}

// ---------------------------------------------------------------------------

Outcome ternary_relationship() {
  Outcome o;
  Vocabulary v;
  for (const char* c : {"Hall", "Movie", "Slot"}) {
    v = create_class(v, c, false);
    v = add_attribute(v, c, {"name", Kind::text, {}, true});
  }
  const std::vector<std::string> parts{"Hall", "Movie", "Slot"};
  v = create_relationship(v, "Screening", parts, {});
  const ClassDef& cls = v.at("Screening");
  const auto links = cls.links();
  if (links.size() != 3) o.fail(std::to_string(links.size()) + " link attributes");
  if (!cls.is_intermediate || !cls.key_unique) o.fail("not a keyed intermediate class");
  Store s(v);
  const ObjectId h = s.insert("Hall", {{"name", std::string("Red")}});
  const ObjectId m = s.insert("Movie", {{"name", std::string("Metropolis")}});
  const ObjectId t = s.insert("Slot", {{"name", std::string("20:00")}});
  s.insert("Screening", {{"hall", h}, {"movie", m}, {"slot", t}});
  try {
    s.insert("Screening", {{"hall", h}, {"movie", m}, {"slot", t}});
    o.fail("duplicate key accepted");
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DuplicateKey) o.fail(std::string("wrong error ") + std::string(to_string(e.code())));
  }
  if (o.pass) o.detail = "3 link attributes, duplicate rejected with DuplicateKey";
  return o;
}

// ---------------------------------------------------------------------------

Outcome export_round_trip() {
  Outcome o;
  const auto d = testing::opera_data();
  const auto replay = testing::replay_in_sqlite(export_store(d.store, Format::sql), d.store);
  if (!replay.error.empty()) o.fail("sqlite: " + replay.error);
  if (replay.foreign_key_violations) o.fail(std::to_string(replay.foreign_key_violations) + " FK violations");
  std::size_t rows = 0;
  for (const auto& [cls, n] : replay.row_counts) rows += n;
  if (rows != d.store.size()) o.fail("row count " + std::to_string(rows));
  if (replay.rebuilt && !replay.rebuilt->integrity_check().empty()) o.fail("rebuilt store fails integrity");

  const std::string xml = export_store(d.store, Format::xml);
  if (export_store(load_xml_export(xml), Format::xml) != xml) o.fail("xml is not a fixpoint");
  if (o.pass) {
    o.detail = std::to_string(rows) + " rows loaded into SQLite, 0 constraint violations; xml fixpoint " +
               std::to_string(xml.size()) + " bytes identical";
  }
  return o;
}

// ---------------------------------------------------------------------------

std::vector<std::string> import_corpus(Rng& rng) {
  std::vector<std::string> out = {
      "name,opera,voice\nSuzuki,Madame Butterfly,mezzo\nSharpless,Madame Butterfly,baritone\n",
      "name;opera;voice\nRocco;Fidelio;bass\nMimi;La Boheme;soprano\n",
      "name\topera\tvoice\nMasetto\tDon Giovanni\tbass\n\tFidelio\t\n",
      "name,opera,voice\n\"Cio-Cio-San, again\",Madame Butterfly,soprano\nshort,row\n",
      "name,opera,voice\n",
  };
  static const char* names[] = {"A", "B", "", "\"Q, uoted\"", "Cio"};
  static const char* operas[] = {"Madame Butterfly", "Fidelio", "Tosca", "", "4", "Don Giovanni"};
  for (int i = 0; i < 200; ++i) {
    std::string src = "name,opera,voice\n";
    const int rows = static_cast<int>(rng() % 25);
    for (int r = 0; r < rows; ++r) {
      src += std::string(names[rng() % 5]) + "," + operas[rng() % 6];
      if (rng() % 8) src += ",v" + std::to_string(r);
      src += rng() % 5 ? "\n" : "\r\n";
    }
    out.push_back(src);
  }
  return out;
}

Outcome import_conservation() {
  Outcome o;
  Rng rng(6'000'000);
  std::size_t sources = 0, rows_total = 0;
  for (const auto& src : import_corpus(rng)) {
    for (bool stub : {false, true}) {
      auto d = testing::opera_data();
      ImportMapping m;
      m.class_name = "Roles";
      m.column_map = {{"name", "name"}, {"opera", "opera"}, {"voice", "voice"}};
      m.unresolved_policy = stub ? UnresolvedPolicy::create_stub : UnresolvedPolicy::reject_row;
      const std::size_t rows = read_delimited(src).rows.size();
      const ImportReport r = import_delimited(d.store, m, src);
      ++sources;
      rows_total += rows;
      if (r.inserted + r.rejected.size() != rows) o.fail("conservation broken on source " + std::to_string(sources));
      if (!d.store.integrity_check().empty()) o.fail("integrity violation after source " + std::to_string(sources));
    }
  }
  if (o.pass) {
    o.detail = std::to_string(sources) + " imports, " + std::to_string(rows_total) +
               " rows conserved, integrity clean";
  }
  return o;
}

// ---------------------------------------------------------------------------

std::string everything(const Store& s) {
  std::string out = compile_ddl(s.vocabulary());
  for (const auto& [id, rec] : s.records()) {
    for (Format f : {Format::txt, Format::html, Format::xml}) out += object_report(s, id, f);
  }
  for (const auto& cls : s.vocabulary().classes) {
    for (Format f : {Format::txt, Format::csv, Format::html, Format::xml}) {
      out += list_report(s, cls.name, Filter{cls.name, {}}, {}, f);
    }
  }
  out += export_store(s, Format::sql);
  out += export_store(s, Format::xml);
  return out;
}

Outcome determinism() {
  Outcome o;
  std::size_t bytes = 0;
  const auto d = testing::opera_data();
  std::vector<Store> stores{d.store};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(7'000'000 + seed);
    stores.push_back(testing::random_store(rng));
  }
  for (const auto& s : stores) {
    const std::string first = everything(s);
    const std::string second = everything(s);
    const Store reloaded = store_from_snapshot(s.vocabulary_ptr(), snapshot_to_json(s));
    if (first != second) o.fail("two runs differ");
    if (everything(reloaded) != first) o.fail("reloaded store renders differently");
    bytes += first.size();
  }
  if (o.pass) o.detail = std::to_string(stores.size()) + " stores, " + std::to_string(bytes) + " bytes identical";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"opera-context-scenario", opera_scenario},
      {"mirror-property", mirror_property},
      {"no-dead-end", no_dead_end},
      {"bidirectional-round-trip", round_trip},
      {"authority-oracle", authority_oracle},
      {"classify-oracle", classify_oracle},
      {"ternary-relationship", ternary_relationship},
      {"sql-xml-export-round-trip", export_round_trip},
      {"import-conservation", import_conservation},
      {"determinism", determinism},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
