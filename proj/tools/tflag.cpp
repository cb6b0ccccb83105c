// tflag: enumeration, constructions, densities and certificate checks.
//
// Exit codes: 0 success, 1 a verification failed, 2 usage or input error.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "tflag/catalog.hpp"
#include "tflag/certificates.hpp"
#include "tflag/constructions.hpp"
#include "tflag/errors.hpp"
#include "tflag/flags.hpp"
#include "tflag/interpretations.hpp"
#include "tflag/io.hpp"
#include "tflag/theory.hpp"

#ifndef TFLAG_VERSION
#define TFLAG_VERSION "dev"
#endif

using namespace tflag;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Run {
  std::string command;
  std::vector<std::string> arguments;
  std::optional<std::uint64_t> seed;
  bool as_json = false;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
};

// Prints `result` and, in JSON mode, the run manifest next to it. The digest
// covers the result only, so it does not depend on wall time.
void emit(const Run& run, const json& result, const std::string& text) {
  if (!run.as_json) {
    std::cout << text;
    return;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - run.start).count();
  json manifest = {{"command", run.command},
                   {"arguments", run.arguments},
                   {"seed", run.seed ? json(*run.seed) : json(nullptr)},
                   {"tool_version", TFLAG_VERSION},
                   {"wall_time_s", wall},
                   {"result_digest", sha256_hex(result.dump())}};
  std::cout << json{{"result", result}, {"manifest", manifest}}.dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// enumerate

int cmd_enumerate(Run& run, const std::string& theory_text, int n, bool emit_models) {
  TheoryId theory;
  try {
    theory = parse_theory(theory_text);
  } catch (const Error&) {
    throw UsageError("unknown theory '" + theory_text + "'");
  }
  if (n < 0 || n > kMaxCanonicalSize) {
    throw UsageError("n must lie in 0.." + std::to_string(kMaxCanonicalSize));
  }
  const auto models = enumerate_models(theory, n);
  json result = {{"theory", std::string(theory_name(theory))}, {"n", n}, {"count", models.size()}};
  std::string text;
  if (emit_models) {
    json list = json::array();
    for (const Model& m : models) {
      list.push_back(model_to_json(m));
      text += format_model_text(m) + "\n";
    }
    result["models"] = list;
  } else {
    text = std::to_string(models.size()) + "\n";
  }
  emit(run, result, text);
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct Check {
  std::string name;
  bool passed;
  std::string detail;
  json report;
};

std::string summary_of(const IdentityReport& r) {
  std::ostringstream s;
  s << r.theory << " level " << r.level << ", " << r.basis_size << " coefficients";
  if (!r.passed) {
    const auto& d = r.differences.front();
    s << ", " << r.differences.size() << " differ; first flag " << d.index << ": " << to_string(d.lhs) << " vs "
      << to_string(d.rhs);
  }
  return s.str();
}

Check identity_check(const std::string& name) {
  const IdentityReport r = verify_identity(name);
  return {name, r.passed, summary_of(r), report_to_json(r)};
}

Check certificate_check(const Certificate& cert) {
  const CertificateReport r = verify_certificate(cert);
  std::ostringstream s;
  s << r.basis_size << " models, min slack " << to_string(r.min_slack) << " at model " << r.min_slack_index;
  for (const auto& [label, ok] : r.psd) {
    if (!ok) s << "; not PSD: " << label;
  }
  if (r.first_negative) s << "; first negative coefficient at model " << *r.first_negative;
  for (const auto& a : r.assumptions) s << "\n    " << a;
  return {r.name, r.passed, s.str(), report_to_json(r)};
}

Check matrix_check() {
  const MatrixReport r = verify_matrix_symmetry();
  std::string detail = r.failure ? "failed: " + *r.failure : std::to_string(r.lines.size()) + " checks";
  return {"MATRICES", r.passed, detail, report_to_json(r)};
}

Check scalar_check() {
  const ScalarReport r = verify_warmup_scalar();
  std::ostringstream s;
  s.precision(12);
  s << "g(1/6) = 1/144: " << (r.value_at_optimum ? "yes" : "no") << ", grid max " << r.grid_max << " over "
    << r.grid_points << " points";
  return {"WARMUP-SCALAR", r.passed, s.str(), report_to_json(r)};
}

Check diagram_check(int level) {
  const DiagramReport r = verify_commutative_diagram(level);
  json j = {{"name", "DIAGRAM-L" + std::to_string(level)},
            {"kind", "diagram"},
            {"passed", r.passed},
            {"level", r.level},
            {"checked", r.checked},
            {"witness", r.witness ? model_to_json(*r.witness) : json(nullptr)},
            {"detail", r.detail}};
  std::string detail = std::to_string(r.checked) + " source flags";
  if (!r.passed) detail += "; " + r.detail;
  return {"DIAGRAM-L" + std::to_string(level), r.passed, detail, j};
}

Check mutation_check(int count, std::uint64_t seed) {
  const auto sample = sample_mutations(count, seed);
  json list = json::array();
  int flipped = 0;
  for (const auto& m : sample) {
    flipped += m.flipped() ? 1 : 0;
    list.push_back({{"matrix", m.matrix},
                    {"index", m.index},
                    {"delta", m.delta},
                    {"symmetric", m.symmetric},
                    {"psd", m.psd},
                    {"conjugacy", m.conjugacy},
                    {"coefficients", m.coefficients},
                    {"flipped", m.flipped()}});
  }
  const bool passed = flipped == count;
  json j = {{"name", "MUTATIONS"}, {"kind", "mutations"}, {"passed", passed}, {"seed", seed}, {"sample", list}};
  std::string detail = std::to_string(flipped) + " of " + std::to_string(count) + " mutations detected";
  for (const auto& m : sample) {
    if (m.flipped()) continue;
    detail += "\n    undetected: M" + std::to_string(m.matrix) + "[" + std::to_string(m.index) + "][" +
              std::to_string(m.index) + "] " + (m.delta > 0 ? "+1" : "-1");
  }
  return {"MUTATIONS", passed, detail, j};
}

std::vector<Check> checks_for(const std::string& target, int mutations, std::uint64_t seed) {
  std::vector<Check> out;
  const auto& ids = identity_names();
  const auto& certs = certificate_names();
  if (target == "all") {
    for (const auto& name : ids) out.push_back(identity_check(name));
    out.push_back(matrix_check());
    for (const auto& name : certs) out.push_back(certificate_check(builtin_certificate(name)));
    out.push_back(scalar_check());
    for (int level : {3, 4}) out.push_back(diagram_check(level));
  } else if (std::find(ids.begin(), ids.end(), target) != ids.end()) {
    out.push_back(identity_check(target));
  } else if (std::find(certs.begin(), certs.end(), target) != certs.end()) {
    out.push_back(certificate_check(builtin_certificate(target)));
  } else if (target == "CERT-SEC42") {
    for (const char* name : {"CERT-SEC42-a1", "CERT-SEC42-a2"}) out.push_back(certificate_check(builtin_certificate(name)));
  } else if (target == "MATRICES") {
    out.push_back(matrix_check());
  } else if (target == "WARMUP-SCALAR") {
    out.push_back(scalar_check());
  } else if (target == "DIAGRAM") {
    for (int level : {3, 4}) out.push_back(diagram_check(level));
  } else if (target == "MUTATIONS") {
    out.push_back(mutation_check(mutations, seed));
  } else if (std::filesystem::is_regular_file(target)) {
    std::ifstream in(target);
    json j;
    try {
      j = json::parse(in);
    } catch (const json::exception& e) {
      throw UsageError(target + ": " + e.what());
    }
    const auto dir = std::filesystem::path(target).parent_path().string();
    out.push_back(certificate_check(certificate_from_json(j, dir.empty() ? "." : dir)));
  } else {
    throw UsageError("unknown verification target '" + target + "'");
  }
  return out;
}

int cmd_verify(Run& run, const std::string& target, int mutations, std::uint64_t seed) {
  std::vector<Check> checks;
  try {
    checks = checks_for(target, mutations, seed);
  } catch (const SchemaError& e) {
    throw UsageError(e.what());
  }
  json list = json::array();
  std::string text;
  int failed = 0;
  for (const auto& c : checks) {
    list.push_back(c.report);
    failed += c.passed ? 0 : 1;
    text += std::string(c.passed ? "PASS " : "FAIL ") + c.name + "  " + c.detail + "\n";
  }
  const int total = static_cast<int>(checks.size());
  text += std::to_string(total - failed) + "/" + std::to_string(total) + " checks passed\n";
  json result = {{"target", target}, {"passed", failed == 0}, {"checks", list},
                 {"summary", {{"passed", total - failed}, {"failed", failed}}}};
  emit(run, result, text);
  return failed == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------
// construct

std::vector<Rational> parse_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
    if (!item.empty()) out.push_back(parse_rational(item));
  }
  return out;
}

int cmd_construct(Run& run, const std::string& kind, const std::string& s_text, int m, std::uint64_t seed,
                  const std::string& delta0_text, bool density, const std::string& out_path) {
  Model g;
  try {
    if (kind == "gammak") {
      if (s_text.empty()) throw UsageError("gammak needs --s");
      g = gamma_k(parse_list(s_text));
    } else if (kind == "bipartite") {
      run.seed = seed;
      g = random_bipartite_orientation(m, seed);
    } else if (kind == "example2") {
      g = example2_orgraph(parse_rational(delta0_text), m);
    } else {
      throw UsageError("unknown construction '" + kind + "' (gammak, bipartite, example2)");
    }
  } catch (const InvalidSpecError& e) {
    throw UsageError(e.what());
  } catch (const SchemaError& e) {
    throw UsageError(e.what());
  }
  json result = {{"construction", kind}, {"n", g.size()}, {"arcs", g.relation_count()}};
  std::string text = kind + ": " + std::to_string(g.size()) + " vertices, " + std::to_string(g.relation_count()) + " arcs\n";
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw UsageError("cannot write " + out_path);
    out << format_model_text(g);
    result["model_file"] = out_path;
  }
  if (density) {
    const DensityReport r = density_report(kind, g);
    result["density"] = report_to_json(r);
    std::ostringstream s;
    s.precision(8);
    s << "density_fdf = " << to_string(r.fdf_density) << " (~" << r.fdf_density.get_d() << ")\n";
    s << "C4-free: " << (r.c4_free ? "yes" : "no") << "\n";
    for (const auto& [name, v] : r.values) s << name << " = " << to_string(v) << " (~" << v.get_d() << ")\n";
    s << "goodman bound: " << (r.goodman_holds ? "holds" : "violated") << "\n";
    s << "fisher bound: " << (r.fisher_holds ? "holds" : "violated") << "\n";
    text += s.str();
  } else if (out_path.empty()) {
    text += format_model_text(g);
    result["model"] = model_to_json(g);
  }
  emit(run, result, text);
  return 0;
}

// ---------------------------------------------------------------------------
// density

int cmd_density(Run& run, const std::string& element, const std::string& model_path) {
  Model g;
  AlgebraElement a;
  try {
    g = read_model_file(model_path);
    if (std::filesystem::is_regular_file(element)) {
      std::ifstream in(element);
      a = element_from_json(json::parse(in));
    } else {
      a = elements::named_element(g.theory(), element);
    }
  } catch (const json::exception& e) {
    throw UsageError(e.what());
  } catch (const SchemaError& e) {
    throw UsageError(e.what());
  } catch (const InvalidModelError& e) {
    throw UsageError(e.what());
  }
  if (a.theory() != g.theory()) throw UsageError("element and model belong to different theories");
  Rational value;
  try {
    value = evaluate(a, g);
  } catch (const EvaluationError& e) {
    throw UsageError(e.what());
  }
  json result = {{"element", element}, {"model_size", g.size()}, {"value", to_string(value)},
                 {"value_approx", value.get_d()}};
  std::ostringstream s;
  s.precision(10);
  s << to_string(value) << " (~" << value.get_d() << ")\n";
  emit(run, result, s.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Flag-algebra tools for Turan-type density problems"};
  app.set_version_flag("--version", TFLAG_VERSION);
  app.require_subcommand(1);
  Run run;
  app.add_flag("--json", run.as_json, "Machine-readable output with a run manifest");

  auto* en = app.add_subcommand("enumerate", "Models of a theory up to isomorphism");
  std::string theory_text;
  int n = 0;
  bool count_only = false, emit_models = false;
  en->add_option("theory", theory_text, "graph, fdf, turan, graphstar, fdfstar, turanstar")->required();
  en->add_option("n", n, "Number of vertices")->required();
  auto* co = en->add_flag("--count-only", count_only, "Print only the count");
  en->add_flag("--emit", emit_models, "Print every model")->excludes(co);
  en->add_flag("--json", run.as_json);

  auto* ve = app.add_subcommand("verify", "Identities, matrices, certificates and diagram checks");
  std::string target;
  int mutations = 16;
  std::uint64_t seed = 1;
  ve->add_option("target", target, "all, a check name, or a certificate JSON file")->required();
  ve->add_option("--mutations", mutations, "Sample size for MUTATIONS")->check(CLI::Range(0, 158));
  ve->add_option("--seed", seed, "Seed for MUTATIONS");
  ve->add_flag("--json", run.as_json);

  auto* cn = app.add_subcommand("construct", "Build an orgraph construction");
  std::string kind, s_text, delta0_text = "1/10", out_path;
  int m = 60;
  std::uint64_t cseed = 0;
  bool density = false;
  cn->add_option("kind", kind, "gammak, bipartite or example2")->required();
  cn->add_option("--s", s_text, "Comma-separated coordinates for gammak");
  cn->add_option("--m", m, "Part size (bipartite) or grid parameter (example2)");
  cn->add_option("--seed", cseed, "Seed for bipartite");
  cn->add_option("--delta0", delta0_text, "example2 parameter as p/q");
  cn->add_flag("--density", density, "Report FDF density and related values");
  cn->add_option("--out", out_path, "Write the model to this file");
  cn->add_flag("--json", run.as_json);

  auto* de = app.add_subcommand("density", "Evaluate an element on a model");
  std::string element, model_path;
  de->add_option("element", element, "Element name or element JSON file")->required();
  de->add_option("--model", model_path, "Model text file")->required();
  de->add_flag("--json", run.as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  for (int i = 1; i < argc; ++i) run.arguments.emplace_back(argv[i]);
  try {
    if (en->parsed()) {
      run.command = "enumerate";
      return cmd_enumerate(run, theory_text, n, emit_models);
    }
    if (ve->parsed()) {
      run.command = "verify";
      if (target == "MUTATIONS") run.seed = seed;
      return cmd_verify(run, target, mutations, seed);
    }
    if (cn->parsed()) {
      run.command = "construct";
      return cmd_construct(run, kind, s_text, m, cseed, delta0_text, density, out_path);
    }
    if (de->parsed()) {
      run.command = "density";
      return cmd_density(run, element, model_path);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
