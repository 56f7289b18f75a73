#include "panoptica/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <csignal>
#include <iostream>
#include <optional>

#include "panoptica/gateway.hpp"
#include "panoptica/ingest.hpp"
#include "panoptica/reports.hpp"
#include "panoptica/traversal.hpp"

namespace panoptica {
namespace {

struct DataOptions {
  std::string data_dir;
  std::string vocab;
  std::string store;

  DataPaths paths() const {
    DataPaths p = data_paths(data_dir.empty() ? default_data_dir() : std::filesystem::path(data_dir));
    if (!vocab.empty()) p.vocabulary = vocab;
    if (!store.empty()) p.store = store;
    return p;
  }
};

/// The data set named by the options, loaded and checked.
struct Workspace {
  DataPaths paths;
  std::shared_ptr<const Vocabulary> vocab;
  Store store;

  static Workspace load(const DataOptions& options) {
    DataPaths paths = options.paths();
    auto vocab = std::make_shared<const Vocabulary>(load_vocabulary(paths.vocabulary));
    require_valid(*vocab);
    Store store = std::filesystem::exists(paths.store) ? load_snapshot(vocab, paths.store) : Store(vocab);
    return Workspace{std::move(paths), vocab, std::move(store)};
  }

  void save() const { save_snapshot(store, paths.store); }
};

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw CLI::ValidationError("expected name=value, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

Kind parse_kind(const std::string& name) {
  auto kind = kind_from_string(name);
  if (!kind) throw Error(ErrorCode::InvalidAttribute, "unknown kind '" + name + "'");
  return *kind;
}

// name:kind or name:kind:required
AttributeDef parse_extra(const std::string& text) {
  const auto first = text.find(':');
  if (first == std::string::npos) {
    throw Error(ErrorCode::InvalidAttribute, "expected name:kind[:required], got '" + text + "'");
  }
  const auto second = text.find(':', first + 1);
  AttributeDef def;
  def.name = text.substr(0, first);
  def.kind = parse_kind(text.substr(first + 1, second == std::string::npos ? std::string::npos : second - first - 1));
  if (second != std::string::npos) {
    const std::string flag = text.substr(second + 1);
    if (flag != "required") throw Error(ErrorCode::InvalidAttribute, "unknown flag '" + flag + "'");
    def.required = true;
  }
  return def;
}

Value parse_cli_value(const Store& store, const AttributeDef& attr, const std::string& text) {
  if (attr.is_link()) {
    if (auto id = parse_value(Kind::link, text)) return *id;
    const auto found = store.find_by_label(attr.target_class, trim(text));
    if (found.size() == 1) return found.front();
    if (found.size() > 1) {
      throw Error(ErrorCode::AmbiguousLink, "'" + text + "' labels " + std::to_string(found.size()) +
                                                " '" + attr.target_class + "' objects");
    }
    throw Error(ErrorCode::DanglingLink, "no '" + attr.target_class + "' labelled '" + text + "'");
  }
  auto v = parse_value(attr.kind, text);
  if (!v) {
    throw Error(ErrorCode::KindMismatch,
                "'" + text + "' is not a valid " + std::string(to_string(attr.kind)) + " for '" + attr.name + "'");
  }
  return *v;
}

Format parse_format(const std::string& name) {
  auto f = format_from_string(name);
  if (!f) throw Error(ErrorCode::UnsupportedFormat, "unknown format '" + name + "'");
  return *f;
}

Filter parse_filter(const Vocabulary& vocab, const std::string& text, const std::string& cls) {
  if (text.empty()) return Filter{cls, {}};
  Json j = Json::parse(text, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::ParseError, "filter is not valid JSON");
  if (!j.contains("class")) j["class"] = cls;
  Filter f = filter_from_json(vocab, j);
  check_filter(vocab, f);
  return f;
}

void emit(std::ostream& out, const std::string& output, const std::string& text) {
  if (output.empty()) {
    out << text;
  } else {
    write_file_atomic(output, text);
  }
}

Gateway* running_gateway = nullptr;

extern "C" void stop_on_signal(int) {
  if (running_gateway) running_gateway->stop();
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Navigational data engine: vocabulary, objects, views, reports.", "panoptica"};
  app.require_subcommand(1);
  app.fallthrough();

  DataOptions data;
  app.add_option("--data-dir", data.data_dir, "Data directory (default: $PANOPTICA_DATA_DIR or .)");
  app.add_option("--vocab", data.vocab, "Vocabulary file (default: <data-dir>/vocabulary.json)");
  app.add_option("--store", data.store, "Store file (default: <data-dir>/store.json)");

  std::function<void()> action;

  // vocab ------------------------------------------------------------------
  auto* vocab_cmd = app.add_subcommand("vocab", "Build and compile a data vocabulary");
  vocab_cmd->require_subcommand(1);

  std::string file, class_name, attr_name, kind_name, target, vocab_name, output;
  bool intermediate = false, required = false, force = false, no_key = false, detach = false;
  std::vector<std::string> participants, extras;

  auto* v_new = vocab_cmd->add_subcommand("new", "Create an empty vocabulary file");
  v_new->add_option("file", file)->required();
  v_new->add_option("--name", vocab_name, "Vocabulary name (default: file stem)");
  v_new->add_flag("--force", force, "Overwrite an existing file");
  v_new->callback([&] {
    action = [&] {
      if (std::filesystem::exists(file) && !force) {
        throw Error(ErrorCode::IoError, "'" + file + "' already exists");
      }
      Vocabulary v;
      v.name = vocab_name.empty() ? std::filesystem::path(file).stem().string() : vocab_name;
      save_vocabulary(v, file);
      out << "created vocabulary \"" << v.name << "\"\n";
    };
  });

  auto* v_class = vocab_cmd->add_subcommand("add-class", "Add a class");
  v_class->add_option("file", file)->required();
  v_class->add_option("class", class_name)->required();
  v_class->add_flag("--intermediate", intermediate, "Mark as an intermediate (relationship) class");
  v_class->callback([&] {
    action = [&] {
      const Vocabulary v = create_class(load_vocabulary(file), class_name, intermediate);
      save_vocabulary(v, file);
      out << "version " << v.version << "\n";
    };
  });

  auto* v_attr = vocab_cmd->add_subcommand("add-attr", "Add an attribute to a class");
  v_attr->add_option("file", file)->required();
  v_attr->add_option("class", class_name)->required();
  v_attr->add_option("attribute", attr_name)->required();
  v_attr->add_option("--kind", kind_name, "text|integer|decimal|date|boolean|link")->required();
  v_attr->add_option("--target", target, "Target class of a link");
  v_attr->add_flag("--required", required);
  v_attr->callback([&] {
    action = [&] {
      const Vocabulary v = add_attribute(load_vocabulary(file), class_name,
                                         AttributeDef{attr_name, parse_kind(kind_name), target, required});
      save_vocabulary(v, file);
      out << "version " << v.version << "\n";
    };
  });

  auto* v_label = vocab_cmd->add_subcommand("set-label", "Choose the label attribute of a class");
  v_label->add_option("file", file)->required();
  v_label->add_option("class", class_name)->required();
  v_label->add_option("attribute", attr_name)->required();
  v_label->callback([&] {
    action = [&] {
      const Vocabulary v = set_label(load_vocabulary(file), class_name, attr_name);
      save_vocabulary(v, file);
      out << "version " << v.version << "\n";
    };
  });

  auto* v_rel = vocab_cmd->add_subcommand("add-rel", "Add a relationship realized as an intermediate class");
  v_rel->add_option("file", file)->required();
  v_rel->add_option("name", class_name)->required();
  v_rel->add_option("participants", participants)->required();
  v_rel->add_option("--attr", extras, "Extra attribute as name:kind[:required]");
  v_rel->add_flag("--no-key", no_key, "Allow duplicate participant combinations");
  v_rel->callback([&] {
    action = [&] {
      std::vector<AttributeDef> defs;
      for (const auto& e : extras) defs.push_back(parse_extra(e));
      Vocabulary v = create_relationship(load_vocabulary(file), class_name, participants, defs);
      if (no_key) v = set_key_unique(v, class_name, false);
      save_vocabulary(v, file);
      out << "version " << v.version << "\n";
    };
  });

  auto* v_validate = vocab_cmd->add_subcommand("validate", "Check a vocabulary");
  v_validate->add_option("file", file)->required();
  v_validate->callback([&] {
    action = [&] {
      const auto diagnostics = validate(load_vocabulary(file));
      if (diagnostics.empty()) {
        out << "OK\n";
        return;
      }
      for (const auto& d : diagnostics) out << to_string(d.code) << ": " << d.message << "\n";
      throw Error(ErrorCode::InvalidVocabulary, std::to_string(diagnostics.size()) + " problem(s)");
    };
  });

  auto* v_ddl = vocab_cmd->add_subcommand("compile-ddl", "Print the relational schema");
  v_ddl->add_option("file", file)->required();
  v_ddl->add_option("-o,--output", output);
  v_ddl->callback([&] { action = [&] { emit(out, output, compile_ddl(load_vocabulary(file))); }; });

  // data -------------------------------------------------------------------
  auto* data_cmd = app.add_subcommand("data", "Controlled input of objects");
  data_cmd->require_subcommand(1);

  std::vector<std::string> assignments, unset, maps, by_id, by_label;
  std::uint64_t id = 0;
  bool stub = false;

  auto* d_insert = data_cmd->add_subcommand("insert", "Insert an object; prints its id");
  d_insert->add_option("class", class_name)->required();
  d_insert->add_option("--set", assignments, "attribute=value (links: id or label)");
  d_insert->callback([&] {
    action = [&] {
      Workspace ws = Workspace::load(data);
      const ClassDef& cls = ws.vocab->at(class_name);
      Values values;
      for (const auto& a : assignments) {
        auto [name, text] = split_assignment(a);
        const AttributeDef* attr = cls.find(name);
        if (!attr) throw Error(ErrorCode::UnknownAttribute, "class '" + cls.name + "' has no attribute '" + name + "'");
        values.insert_or_assign(name, parse_cli_value(ws.store, *attr, text));
      }
      const ObjectId created = ws.store.insert(class_name, std::move(values));
      ws.save();
      out << created.value << "\n";
    };
  });

  auto* d_update = data_cmd->add_subcommand("update", "Change attributes of an object");
  d_update->add_option("id", id)->required();
  d_update->add_option("--set", assignments, "attribute=value (links: id or label)");
  d_update->add_option("--unset", unset, "Attribute to clear");
  d_update->callback([&] {
    action = [&] {
      Workspace ws = Workspace::load(data);
      const ClassDef& cls = ws.store.class_of(ObjectId{id});
      Patch patch;
      for (const auto& a : assignments) {
        auto [name, text] = split_assignment(a);
        const AttributeDef* attr = cls.find(name);
        if (!attr) throw Error(ErrorCode::UnknownAttribute, "class '" + cls.name + "' has no attribute '" + name + "'");
        patch.insert_or_assign(name, parse_cli_value(ws.store, *attr, text));
      }
      for (const auto& name : unset) patch.insert_or_assign(name, std::nullopt);
      ws.store.update(ObjectId{id}, patch);
      ws.save();
      out << id << "\n";
    };
  });

  auto* d_delete = data_cmd->add_subcommand("delete", "Delete an object");
  d_delete->add_option("id", id)->required();
  d_delete->add_flag("--detach", detach, "Clear optional links pointing at the object");
  d_delete->callback([&] {
    action = [&] {
      Workspace ws = Workspace::load(data);
      ws.store.remove(ObjectId{id}, detach);
      ws.save();
      out << "deleted " << id << "\n";
    };
  });

  auto* d_inspect = data_cmd->add_subcommand("inspect", "Rank classes matching a delimited file");
  d_inspect->add_option("file", file)->required();
  d_inspect->callback([&] {
    action = [&] {
      Workspace ws = Workspace::load(data);
      const Inspection i = inspect(*ws.vocab, read_file(file), &ws.store);
      for (const auto& m : i.ranking) out << match_report(m) << "\n";
    };
  });

  auto* d_import = data_cmd->add_subcommand("import", "Import rows of a delimited file");
  d_import->add_option("file", file)->required();
  d_import->add_option("--class", class_name, "Target class (default: best match)");
  d_import->add_option("--map", maps, "column=attribute (default: matching names)");
  d_import->add_option("--by-id", by_id, "Link attribute given as ids");
  d_import->add_option("--by-label", by_label, "Link attribute given as labels");
  d_import->add_flag("--stub", stub, "Create missing link targets from their labels");
  d_import->callback([&] {
    action = [&] {
      Workspace ws = Workspace::load(data);
      const std::string source = read_file(file);
      ImportMapping mapping;
      if (maps.empty()) {
        const Inspection i = inspect(*ws.vocab, source, &ws.store);
        mapping = i.proposed;
        if (!class_name.empty() && class_name != mapping.class_name) {
          mapping = ImportMapping{};
          mapping.class_name = class_name;
          const ClassDef& cls = ws.vocab->at(class_name);
          for (const auto& h : i.headers) {
            for (const auto& attr : cls.attributes) {
              if (normalize_name(attr.name) == normalize_name(h)) mapping.column_map[h] = attr.name;
            }
          }
        }
      } else {
        if (class_name.empty()) throw CLI::ValidationError("--map requires --class");
        mapping.class_name = class_name;
        for (const auto& m : maps) {
          auto [column, attribute] = split_assignment(m);
          mapping.column_map[column] = attribute;
        }
      }
      for (const auto& a : by_id) mapping.link_resolution[a] = LinkResolution::by_id;
      for (const auto& a : by_label) mapping.link_resolution[a] = LinkResolution::by_label;
      mapping.unresolved_policy = stub ? UnresolvedPolicy::create_stub : UnresolvedPolicy::reject_row;
      const ImportReport report = import_delimited(ws.store, mapping, source);
      ws.save();
      out << "class=" << mapping.class_name << " inserted=" << report.inserted
          << " rejected=" << report.rejected.size() << " stubs_created=" << report.stubs_created << "\n";
      for (const auto& r : report.rejected) {
        out << "row " << r.row << ": " << to_string(r.code) << ": " << r.message << "\n";
      }
    };
  });

  auto* d_check = data_cmd->add_subcommand("check", "Run the integrity check");
  d_check->callback([&] {
    action = [&] {
      const DataPaths paths = data.paths();
      auto vocab = std::make_shared<const Vocabulary>(load_vocabulary(paths.vocabulary));
      const Store store = std::filesystem::exists(paths.store)
                              ? store_from_snapshot(vocab, Json::parse(read_file(paths.store)), false)
                              : Store(vocab);
      const auto violations = store.integrity_check();
      if (violations.empty()) {
        out << "OK\n";
        return;
      }
      for (const auto& v : violations) {
        out << to_string(v.code) << " #" << v.object.value << (v.attribute.empty() ? "" : "." + v.attribute)
            << ": " << v.message << "\n";
      }
      throw Error(ErrorCode::CorruptStore, std::to_string(violations.size()) + " violation(s)");
    };
  });

  // view -------------------------------------------------------------------
  auto* view_cmd = app.add_subcommand("view", "Browse the information space");
  view_cmd->require_subcommand(1);
  std::string filter_text;

  auto* w_focus = view_cmd->add_subcommand("focus", "Show an object with its context");
  w_focus->add_option("id", id)->required();
  w_focus->callback([&] {
    action = [&] {
      Workspace ws = Workspace::load(data);
      Session session;
      out << render_view_text(focus(ws.store, session, ObjectId{id}));
    };
  });

  auto* w_list = view_cmd->add_subcommand("list", "List the objects of a class");
  w_list->add_option("class", class_name)->required();
  w_list->add_option("--filter", filter_text, "Filter as JSON");
  w_list->callback([&] {
    action = [&] {
      Workspace ws = Workspace::load(data);
      Session session;
      Filter filter = parse_filter(*ws.vocab, filter_text, class_name);
      if (!filter.clauses.empty()) set_filter(ws.store, session, filter);
      for (const auto& e : select_class(ws.store, session, class_name)) {
        out << e.label << " [#" << e.id.value << "]\n";
      }
    };
  });

  // report -----------------------------------------------------------------
  auto* report_cmd = app.add_subcommand("report", "Reports and exports");
  report_cmd->require_subcommand(1);
  std::string format_name;
  std::vector<std::string> columns;

  auto* r_object = report_cmd->add_subcommand("object", "Object with its context");
  r_object->add_option("id", id)->required();
  r_object->add_option("--format", format_name, "txt|html|xml")->default_str("txt");
  r_object->add_option("-o,--output", output);
  r_object->callback([&] {
    action = [&] {
      Workspace ws = Workspace::load(data);
      emit(out, output, object_report(ws.store, ObjectId{id}, parse_format(format_name.empty() ? "txt" : format_name)));
    };
  });

  auto* r_list = report_cmd->add_subcommand("list", "Filtered list of a class");
  r_list->add_option("class", class_name)->required();
  r_list->add_option("--format", format_name, "txt|csv|html|xml");
  r_list->add_option("--columns", columns, "Attributes to show (default: all)")->delimiter(',');
  r_list->add_option("--filter", filter_text, "Filter as JSON");
  r_list->add_option("-o,--output", output);
  r_list->callback([&] {
    action = [&] {
      Workspace ws = Workspace::load(data);
      const Filter filter = parse_filter(*ws.vocab, filter_text, class_name);
      emit(out, output,
           list_report(ws.store, class_name, filter, columns, parse_format(format_name.empty() ? "csv" : format_name)));
    };
  });

  auto* r_export = report_cmd->add_subcommand("export", "Whole store as SQL or XML");
  r_export->add_option("--format", format_name, "sql|xml");
  r_export->add_option("-o,--output", output);
  r_export->callback([&] {
    action = [&] {
      Workspace ws = Workspace::load(data);
      emit(out, output, export_store(ws.store, parse_format(format_name.empty() ? "xml" : format_name)));
    };
  });

  // serve ------------------------------------------------------------------
  auto* serve_cmd = app.add_subcommand("serve", "Run the HTTP service");
  int port = kDefaultPort;
  std::string host = "127.0.0.1";
  int idle = 3600;
  serve_cmd->add_option("--port", port, "Listening port")->capture_default_str();
  serve_cmd->add_option("--host", host, "Listening address")->capture_default_str();
  serve_cmd->add_option("--session-idle", idle, "Seconds before an idle session expires")->capture_default_str();
  serve_cmd->callback([&] {
    action = [&] {
      auto engine = Engine::open(data.paths());
      require_valid(engine->vocabulary());
      GatewayOptions options;
      options.session_idle = std::chrono::seconds(idle);
      Gateway gateway(engine, options);
      const int bound = gateway.bind(host, port);
      out << "listening on " << host << ":" << bound << std::endl;
      running_gateway = &gateway;
      std::signal(SIGINT, stop_on_signal);
      std::signal(SIGTERM, stop_on_signal);
      gateway.run();
      running_gateway = nullptr;
    };
  });

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage: " << e.what() << "\n";
    err << "run 'panoptica --help' for the command list\n";
    return 2;
  }

  try {
    action();
  } catch (const CLI::ValidationError& e) {
    err << "usage: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
    return 1;
  } catch (const Json::exception& e) {
    err << "error: " << to_string(ErrorCode::ParseError) << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace panoptica
