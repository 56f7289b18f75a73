#include "fixtures.hpp"

namespace panoptica::testing {

namespace {

AttributeDef text(std::string name, bool required = false) {
  return AttributeDef{std::move(name), Kind::text, {}, required};
}

AttributeDef link(std::string name, std::string target, bool required = false) {
  return AttributeDef{std::move(name), Kind::link, std::move(target), required};
}

Vocabulary dependant(Vocabulary v, const std::string& name) {
  v = create_class(v, name, false);
  v = add_attribute(v, name, text("name", true));
  return add_attribute(v, name, link("opera", "Opera Works", true));
}

}  // namespace

Vocabulary opera_vocabulary() {
  Vocabulary v;
  v.name = "opera";
  v = create_class(v, "Opera Works", false);
  v = add_attribute(v, "Opera Works", text("title", true));
  v = add_attribute(v, "Opera Works", text("composer"));
  v = add_attribute(v, "Opera Works", AttributeDef{"premiere", Kind::date, {}, false});

  v = dependant(v, "Roles");
  v = add_attribute(v, "Roles", text("voice"));
  v = dependant(v, "Small Roles");
  v = add_attribute(v, "Small Roles", text("voice"));
  v = dependant(v, "Silent Roles");
  v = dependant(v, "Choir");
  v = add_attribute(v, "Choir", AttributeDef{"singers", Kind::integer, {}, false});
  v = dependant(v, "Orchestra Cast");
  v = add_attribute(v, "Orchestra Cast", AttributeDef{"fee", Kind::decimal, {}, false});
  v = dependant(v, "Scenic Music");
  v = add_attribute(v, "Scenic Music", AttributeDef{"offstage", Kind::boolean, {}, false});
  return v;
}

OperaData opera_data() {
  Store s(opera_vocabulary());
  auto opera = [&](const char* title, const char* composer, Date premiere) {
    return s.insert("Opera Works", {{"title", std::string(title)},
                                    {"composer", std::string(composer)},
                                    {"premiere", premiere}});
  };
  auto dep = [&](const char* cls, const char* name, ObjectId o) {
    return s.insert(cls, {{"name", std::string(name)}, {"opera", o}});
  };

  const ObjectId don = opera("Don Giovanni", "Wolfgang Amadeus Mozart", {1787, 10, 29});
  const ObjectId fidelio = opera("Fidelio", "Ludwig van Beethoven", {1805, 11, 20});
  const ObjectId figaro = opera("Figaro's wedding", "Wolfgang Amadeus Mozart", {1786, 5, 1});
  const ObjectId butterfly = opera("Madame Butterfly", "Giacomo Puccini", {1904, 2, 17});

  // Inserted out of label order on purpose.
  const ObjectId pinkerton =
      s.insert("Roles", {{"name", std::string("F. B. Pinkerton")}, {"opera", butterfly},
                         {"voice", std::string("tenor")}});
  const ObjectId cio =
      s.insert("Roles", {{"name", std::string("Cio-Cio-San")}, {"opera", butterfly},
                         {"voice", std::string("soprano")}});
  const ObjectId mother = dep("Small Roles", "Cio-Cio-San's mother", butterfly);
  const ObjectId bonze =
      s.insert("Small Roles", {{"name", std::string("Bonze")}, {"opera", butterfly},
                               {"voice", std::string("bass")}});
  const ObjectId dolore = dep("Silent Roles", "Dolore", butterfly);
  const ObjectId choir = s.insert(
      "Choir", {{"name", std::string("Female Choir")}, {"opera", butterfly}, {"singers", std::int64_t{24}}});

  dep("Roles", "Don Giovanni", don);
  dep("Roles", "Leporello", don);
  dep("Choir", "Peasants", don);
  s.insert("Orchestra Cast", {{"name", std::string("Mandolin")}, {"opera", don}, {"fee", 1250.5}});
  s.insert("Scenic Music",
           {{"name", std::string("Stage Band")}, {"opera", don}, {"offstage", true}});
  dep("Roles", "Leonore", fidelio);
  dep("Roles", "Florestan", fidelio);
  dep("Choir", "Prisoners' Chorus", fidelio);
  dep("Roles", "Figaro", figaro);
  dep("Roles", "Susanna", figaro);

  return OperaData{std::move(s), don, fidelio, figaro, butterfly, cio, pinkerton,
                   bonze, mother, dolore, choir};
}

Vocabulary composition_vocabulary() {
  Vocabulary v;
  v.name = "music";
  v = create_class(v, "Composition", false);
  v = create_class(v, "Author", false);
  v = add_attribute(v, "Composition", text("title", true));
  v = add_attribute(v, "Composition", link("author", "Author"));
  v = add_attribute(v, "Author", text("name", true));
  v = add_attribute(v, "Author", AttributeDef{"born", Kind::date, {}, false});
  return v;
}

}  // namespace panoptica::testing
