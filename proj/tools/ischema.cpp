// ischema: check, simulate, classify, analogy and enumerate over .ist/.scn files.
//
// Exit codes: 0 success or satisfied, 1 violated or no analogy, 2 usage,
// parse or evaluation error, 3 unsimulatable rule set, 4 search space too large.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "ischema/dsl.hpp"
#include "ischema/dynamics.hpp"
#include "ischema/enumerate.hpp"
#include "ischema/library.hpp"
#include "ischema/logic.hpp"

using namespace ischema;
using json = nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kFalse = 1;
constexpr int kError = 2;
constexpr int kDynamics = 3;
constexpr int kTooLarge = 4;

struct Options {
  bool json = false;
  std::string epsilon;
  std::string library;
  std::vector<std::string> params;
  std::vector<std::string> binds;
  std::optional<std::size_t> steps;
  std::string delta;
  std::string trace_out;
  std::string schemas;
  std::string schema;
  std::string grid;
  bool count_only = false;
  std::string free;
  std::uint64_t cap = 10'000'000;
  std::vector<std::string> files;
};

// Failure already reported on stderr; carries the exit code.
struct Exit {
  int code;
};

struct Output {
  std::ostringstream out;
  std::ostringstream err;
};

bool use_color() {
  const char* v = std::getenv("ISCHEMA_COLOR");
  return v && std::string_view(v) == "1";
}

std::string paint(const std::string& text, bool good) {
  if (!use_color()) return text;
  return (good ? "\033[32m" : "\033[31m") + text + "\033[0m";
}

std::string read_file(const std::string& path, Output& io) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    io.err << path << ": error[InvalidArgument]: cannot read file\n";
    throw Exit{kError};
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void print_diagnostics(const std::vector<Diagnostic>& diags, Output& io) {
  for (const auto& d : diags) io.err << format_diagnostic(d) << "\n";
}

std::pair<std::string, std::string> split_pair(const std::string& s, const char* flag, Output& io) {
  auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == s.size()) {
    io.err << "error[InvalidArgument]: " << flag << " expects name=value, got '" << s << "'\n";
    throw Exit{kError};
  }
  return {s.substr(0, eq), s.substr(eq + 1)};
}

Rational rational_flag(const std::string& s, const char* flag, Output& io) {
  auto v = parse_rational(s);
  if (!v) {
    io.err << "error[InvalidArgument]: " << flag << " expects a rational, got '" << s << "'\n";
    throw Exit{kError};
  }
  return *v;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

class Session {
 public:
  Session(const Options& opt, Output& io) : opt_(opt), io_(io) {
    if (!opt.epsilon.empty()) {
      tol_.epsilon = rational_flag(opt.epsilon, "--epsilon", io);
      if (tol_.epsilon < 0) {
        io.err << "error[InvalidArgument]: --epsilon must be non-negative\n";
        throw Exit{kError};
      }
    }
    for (const auto& p : opt.params) {
      auto [name, value] = split_pair(p, "--param", io);
      params_[name] = rational_flag(value, "--param", io);
    }
    std::filesystem::path dir = opt.library.empty() ? Library::default_dir() : std::filesystem::path(opt.library);
    lib_ = Library::load(dir);
  }

  const Library& lib() const { return lib_; }
  const Tolerances& tol() const { return tol_; }
  const std::map<std::string, Rational>& params() const { return params_; }

  Scenario scenario(const std::string& path) {
    auto parsed = parse_scenario(read_file(path, io_), path);
    print_diagnostics(parsed.diagnostics, io_);
    if (!parsed.ok()) throw Exit{kError};
    auto diags = sort_check(*parsed.value, &lib_.prelude());
    print_diagnostics(diags, io_);
    if (has_errors(diags)) throw Exit{kError};
    return std::move(*parsed.value);
  }

  Theory theory(const std::string& path) {
    auto parsed = parse_theory(read_file(path, io_), path);
    print_diagnostics(parsed.diagnostics, io_);
    if (!parsed.ok()) throw Exit{kError};
    auto diags = sort_check(*parsed.value, &lib_.prelude());
    print_diagnostics(diags, io_);
    if (has_errors(diags)) throw Exit{kError};
    return std::move(*parsed.value);
  }

  SimConfig sim_config() const {
    SimConfig cfg;
    cfg.tol = tol_;
    cfg.env = &prelude_env_;
    if (!opt_.delta.empty()) {
      cfg.delta = rational_flag(opt_.delta, "--delta", io_);
      if (cfg.delta <= 0) {
        io_.err << "error[NonPositiveDelta]: --delta must be positive\n";
        throw Exit{kError};
      }
    }
    return cfg;
  }

  // The scenario's trace, simulated first when it is generative.
  Trace trace_of(const Scenario& sc) {
    if (sc.trace) return *sc.trace;
    prelude_env_ = Environment(Theory{}, &lib_.prelude());
    std::vector<Rule> rules = *sc.rules;
    if (!opt_.delta.empty()) {
      for (auto& r : rules) {
        if (r.kind == RuleKind::Gravity) r.delta.reset();
      }
    }
    Scenario copy = sc;
    copy.rules = std::move(rules);
    return simulate(copy, sim_config(), opt_.steps);
  }

  ClassifyOptions classify_options() const {
    ClassifyOptions o;
    o.tol = tol_;
    o.params = params_;
    return o;
  }

 private:
  const Options& opt_;
  Output& io_;
  Library lib_;
  Tolerances tol_;
  std::map<std::string, Rational> params_;
  Environment prelude_env_;
};

json binding_json(const RoleBinding& b) {
  json j = json::object();
  for (const auto& [role, entity] : b) j[role] = entity;
  return j;
}

json report_json(const CheckReport& r) {
  json axioms = json::array();
  for (const auto& a : r.axioms) {
    json w = nullptr;
    if (a.witness) w = {{"time", a.witness->time}, {"subformula", a.witness->text}};
    axioms.push_back({{"axiom", a.text}, {"satisfied", a.satisfied}, {"witness", w}});
  }
  return axioms;
}

void print_report(const CheckReport& r, Output& io) {
  io.out << r.theory << " {";
  bool first = true;
  for (const auto& [role, entity] : r.binding) {
    io.out << (first ? "" : ", ") << role << "->" << entity;
    first = false;
  }
  io.out << "}\n";
  for (const auto& a : r.axioms) {
    io.out << "  " << a.text << ": " << paint(a.satisfied ? "satisfied" : "violated", a.satisfied);
    if (a.witness) io.out << " (at t=" << a.witness->time << ": " << a.witness->text << ")";
    io.out << "\n";
  }
  io.out << "result: " << paint(r.satisfied() ? "satisfied" : "violated", r.satisfied()) << "\n";
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

int run_check(const Options& opt, Output& io) {
  Session s(opt, io);
  Theory theory = s.theory(opt.files.at(0));
  Scenario sc = s.scenario(opt.files.at(1));
  Trace trace = s.trace_of(sc);
  World world = world_for(s.lib(), theory, sc);
  Environment env = make_environment(s.lib(), theory, s.params());

  RoleBinding fixed;
  for (const auto& b : opt.binds) {
    auto [role, entity] = split_pair(b, "--bind", io);
    fixed[role] = entity;
  }
  bool complete = std::all_of(theory.roles.begin(), theory.roles.end(),
                              [&](const RoleDecl& r) { return fixed.contains(r.role); });
  std::optional<CheckReport> report;
  std::size_t searched = 0;
  if (complete) {
    report = check_theory(theory, env, world, trace, fixed, s.tol());
  } else {
    for (const auto& [role, entity] : fixed) {
      if (!theory.role(role)) throw Error(ErrorCode::MissingRole, theory.name + " has no role '" + role + "'");
      world.entity(entity);
    }
    // Unbound roles: first satisfying completion of the given binding.
    for (const auto& b : candidate_bindings(theory, world)) {
      bool agrees = std::all_of(fixed.begin(), fixed.end(),
                                [&](const auto& kv) { return b.at(kv.first) == kv.second; });
      if (!agrees) continue;
      ++searched;
      CheckReport r = check_theory(theory, env, world, trace, b, s.tol());
      if (r.satisfied()) {
        report = std::move(r);
        break;
      }
    }
  }
  bool ok = report && report->satisfied();
  if (opt.json) {
    json j = {{"command", "check"}, {"theory", theory.name}, {"satisfied", ok}};
    j["binding"] = report ? binding_json(report->binding) : binding_json(fixed);
    j["axioms"] = report ? report_json(*report) : json::array();
    if (!complete) j["searched"] = searched;
    io.out << j.dump(2) << "\n";
  } else if (report) {
    print_report(*report, io);
    if (!complete) io.out << "binding found after " << searched << " candidate(s)\n";
  } else {
    io.out << theory.name << ": no binding satisfies the theory (searched " << searched << " binding(s))\n";
    io.out << "result: " << paint("violated", false) << "\n";
  }
  return ok ? kOk : kFalse;
}

int run_simulate(const Options& opt, Output& io) {
  Session s(opt, io);
  Scenario sc = s.scenario(opt.files.at(0));
  if (!sc.rules) {
    io.err << opt.files.at(0) << ": error[InvalidArgument]: scenario '" << sc.name
           << "' has a trace, not rules; nothing to simulate\n";
    return kError;
  }
  Trace trace = s.trace_of(sc);
  std::string doc = serialize_trace(trace, sc.entities);
  if (!opt.trace_out.empty()) {
    std::ofstream f(opt.trace_out, std::ios::binary);
    if (!f) {
      io.err << opt.trace_out << ": error[InvalidArgument]: cannot write file\n";
      return kError;
    }
    f << doc;
  }
  if (opt.json) {
    io.out << doc;
  } else {
    for (const auto& st : trace.states) {
      io.out << "t=" << st.time;
      for (const auto& [key, value] : st.values) io.out << " " << key.first << "." << key.second << "=" << format_rational(value);
      for (const auto& f : st.forces) io.out << " force:" << f.label << "@" << f.target;
      io.out << "\n";
    }
  }
  return kOk;
}

int run_classify(const Options& opt, Output& io) {
  Session s(opt, io);
  Scenario sc = s.scenario(opt.files.at(0));
  Trace trace = s.trace_of(sc);
  auto results = classify(s.lib(), sc, trace, split_list(opt.schemas), s.classify_options());
  if (opt.json) {
    json list = json::array();
    for (const auto& c : results) {
      list.push_back({{"schema", c.binding.schema}, {"binding", binding_json(c.binding.map())}});
    }
    io.out << json{{"command", "classify"}, {"scenario", sc.name}, {"results", list}}.dump(2) << "\n";
  } else if (results.empty()) {
    io.out << "no schema instances\n";
  } else {
    for (const auto& c : results) io.out << c.binding.to_text() << "\n";
  }
  return kOk;
}

int run_analogy(const Options& opt, Output& io) {
  Session s(opt, io);
  if (opt.schema.empty()) {
    io.err << "error[InvalidArgument]: analogy needs --schema\n";
    return kError;
  }
  s.lib().schema(opt.schema);
  Scenario a = s.scenario(opt.files.at(0));
  Scenario b = s.scenario(opt.files.at(1));
  Trace ta = s.trace_of(a);
  Trace tb = s.trace_of(b);
  auto found = analogy(s.lib(), a, ta, b, tb, opt.schema, s.classify_options());
  if (opt.json) {
    json j = {{"command", "analogy"}, {"schema", opt.schema}, {"found", found.has_value()}};
    j["a"] = found ? binding_json(found->first.map()) : json(nullptr);
    j["b"] = found ? binding_json(found->second.map()) : json(nullptr);
    io.out << j.dump(2) << "\n";
  } else if (found) {
    io.out << a.name << ": " << found->first.to_text() << "\n";
    io.out << b.name << ": " << found->second.to_text() << "\n";
  } else {
    io.out << "no analogy: " << opt.schema << " does not hold in both scenarios\n";
  }
  return found ? kOk : kFalse;
}

int run_enumerate(const Options& opt, Output& io) {
  Session s(opt, io);
  Theory theory = s.theory(opt.files.at(0));
  Scenario sc = s.scenario(opt.files.at(1));
  if (opt.grid.empty()) {
    io.err << "error[InvalidArgument]: enumerate needs --grid x0:x1,y0:y1[,step]\n";
    return kError;
  }
  GridSpec grid = parse_grid(opt.grid);
  grid.free = opt.free.empty() ? default_free_entities(sc) : split_list(opt.free);
  grid.horizon = opt.steps.value_or(sc.trace ? sc.trace->length() : sc.horizon.value_or(1));
  grid.cap = opt.cap;
  for (const auto& id : grid.free) find_entity(sc.entities, id);

  RoleBinding binding;
  for (const auto& b : opt.binds) {
    auto [role, entity] = split_pair(b, "--bind", io);
    binding[role] = entity;
  }
  // Roles left unbound go to the entity of the same name.
  for (const auto& r : theory.roles) {
    if (!binding.contains(r.role) &&
        std::any_of(sc.entities.begin(), sc.entities.end(), [&](const EntityDecl& e) { return e.id == r.role; })) {
      binding[r.role] = r.role;
    }
  }
  Environment env = make_environment(s.lib(), theory, s.params());
  Scenario skeleton = sc;
  skeleton.sorts = world_for(s.lib(), theory, sc).sorts().user_sorts();
  if (opt.count_only) {
    auto n = count_models(theory, env, skeleton, grid, binding, s.tol());
    if (opt.json) {
      io.out << json{{"command", "enumerate"}, {"count", n}}.dump(2) << "\n";
    } else {
      io.out << n << "\n";
    }
    return kOk;
  }
  auto models = enumerate_models(theory, env, skeleton, grid, binding, s.tol());
  if (opt.json) {
    json list = json::array();
    for (const auto& m : models) {
      json states = json::array();
      for (const auto& st : m.states) {
        json values = json::object();
        for (const auto& id : grid.free) {
          values[id + ".x"] = format_rational(st.at(id, "x"));
          values[id + ".y"] = format_rational(st.at(id, "y"));
        }
        states.push_back({{"t", st.time}, {"values", values}});
      }
      list.push_back(states);
    }
    io.out << json{{"command", "enumerate"}, {"count", models.size()}, {"models", list}}.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < models.size(); ++i) {
      io.out << "model " << i + 1 << ":";
      for (const auto& id : grid.free) {
        for (const auto& st : models[i].states) {
          io.out << " " << id << "@" << st.time << "=(" << format_rational(st.at(id, "x")) << ","
                 << format_rational(st.at(id, "y")) << ")";
        }
      }
      io.out << "\n";
    }
    io.out << models.size() << " model(s)\n";
  }
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::ConflictingEffects:
    case ErrorCode::UnstratifiableRuleSet:
      return kDynamics;
    case ErrorCode::SearchSpaceTooLarge:
      return kTooLarge;
    default:
      return kError;
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"Image-schema logic engine"};
  app.require_subcommand(1);

  auto common = [&](CLI::App* cmd) {
    cmd->add_flag("--json", opt.json, "JSON output");
    cmd->add_option("--epsilon", opt.epsilon, "Coincidence tolerance (rational)");
    cmd->add_option("--library", opt.library, "Schema library directory");
    cmd->add_option("--param", opt.params, "Override a theory parameter, name=value");
  };

  auto* check = app.add_subcommand("check", "Check a theory against a scenario");
  check->add_option("theory", opt.files, "theory.ist and scenario.scn")->expected(2)->required();
  check->add_option("--bind", opt.binds, "Bind a role, role=entity");
  check->add_option("--steps", opt.steps, "Trace length for generative scenarios");
  check->add_option("--delta", opt.delta, "Gravity step for generative scenarios");
  common(check);

  auto* sim = app.add_subcommand("simulate", "Simulate a generative scenario");
  sim->add_option("scenario", opt.files, "scenario.scn")->expected(1)->required();
  sim->add_option("--steps", opt.steps, "Trace length");
  sim->add_option("--delta", opt.delta, "Gravity step");
  sim->add_option("--trace-out", opt.trace_out, "Write the trace JSON here");
  common(sim);

  auto* cls = app.add_subcommand("classify", "List the schema instances of a scenario");
  cls->add_option("scenario", opt.files, "scenario.scn")->expected(1)->required();
  cls->add_option("--schemas", opt.schemas, "Comma-separated schema names");
  cls->add_option("--steps", opt.steps, "Trace length for generative scenarios");
  cls->add_option("--delta", opt.delta, "Gravity step for generative scenarios");
  common(cls);

  auto* ana = app.add_subcommand("analogy", "Find a schema shared by two scenarios");
  ana->add_option("scenarios", opt.files, "a.scn b.scn")->expected(2)->required();
  ana->add_option("--schema", opt.schema, "Schema name")->required();
  ana->add_option("--steps", opt.steps, "Trace length for generative scenarios");
  common(ana);

  auto* en = app.add_subcommand("enumerate", "Enumerate grid models of a theory");
  en->add_option("files", opt.files, "theory.ist scenario.scn")->expected(2)->required();
  en->add_option("--grid", opt.grid, "x0:x1,y0:y1[,step]")->required();
  en->add_option("--steps", opt.steps, "Trace length");
  en->add_flag("--count-only", opt.count_only, "Print only the number of models");
  en->add_option("--free", opt.free, "Comma-separated entities that move on the grid");
  en->add_option("--bind", opt.binds, "Bind a role, role=entity");
  en->add_option("--cap", opt.cap, "Largest search space allowed")->check(CLI::PositiveNumber);
  common(en);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kError;
  }

  Output io;
  int rc = kError;
  std::string command = app.get_subcommands().front()->get_name();
  try {
    if (command == "check") rc = run_check(opt, io);
    if (command == "simulate") rc = run_simulate(opt, io);
    if (command == "classify") rc = run_classify(opt, io);
    if (command == "analogy") rc = run_analogy(opt, io);
    if (command == "enumerate") rc = run_enumerate(opt, io);
  } catch (const Exit& e) {
    rc = e.code;
  } catch (const Error& e) {
    io.err << "error[" << to_string(e.code()) << "]: " << e.what() << "\n";
    rc = exit_code_for(e.code());
  }
  if (rc >= kError && opt.json && io.out.str().empty()) {
    io.out << json{{"command", command}, {"error", {{"exit_code", rc}, {"message", io.err.str()}}}}.dump(2)
           << "\n";
  }
  std::cout << io.out.str();
  std::cerr << io.err.str();
  return rc;
}
