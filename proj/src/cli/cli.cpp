#include "stagedtree/cli/cli.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <thread>

#include "stagedtree/balance/balance.hpp"
#include "stagedtree/onestage/onestage.hpp"
#include "stagedtree/sip/sip.hpp"
#include "stagedtree/tree/dsl.hpp"

namespace staged::cli {

using json = nlohmann::ordered_json;
using tree::StagedTree;

namespace fs = std::filesystem;

namespace {

std::size_t parse_size(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long x = 0;
  try {
    x = std::stoull(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != v.size() || v.empty()) throw std::invalid_argument("budget value for " + key + " is not a number: " + v);
  return static_cast<std::size_t>(x);
}

json polys(const std::vector<algebra::Polynomial>& ps) {
  json out = json::array();
  for (const auto& p : ps) out.push_back(p.to_string());
  return out;
}

json certificate_json(const StagedTree& t, const minors::ToricCertificate& c) {
  json j;
  j["method"] = c.method;
  j["verified"] = c.verified;
  if (!c.verified) {
    j["failing_clause"] = c.failing_clause;
    j["detail"] = c.detail;
  }
  json forms = json::array();
  for (const auto& f : c.forms) forms.push_back(f.to_string());
  j["forms"] = forms;
  json images = json::array();
  for (const auto& m : c.monomial_images) images.push_back(algebra::monomial_to_string(m, *t.label_vars()));
  j["monomial_images"] = images;
  j["binomial_generators"] = polys(c.binomial_generators);
  if (c.seed) j["seed"] = *c.seed;
  if (c.trial) j["trial"] = *c.trial;
  if (!c.sip_index.empty()) {
    json idx = json::object();
    for (const auto& [s, i] : c.sip_index) idx[s] = i;
    j["sip_index"] = idx;
  }
  if (!c.frontier.empty()) j["frontier"] = c.frontier;
  return j;
}

json tree_json(const StagedTree& t) {
  json j;
  j["leaves"] = t.num_leaves();
  j["depth"] = t.depth();
  j["vertices"] = t.size();
  json stages = json::array();
  for (std::size_t s = 0; s < t.stages().size(); ++s) {
    if (t.is_z_stage(static_cast<int>(s))) continue;
    json st;
    st["id"] = t.stage(static_cast<int>(s)).id;
    st["labels"] = t.stage(static_cast<int>(s)).labels;
    st["vertices"] = t.stage_vertices(static_cast<int>(s)).size();
    stages.push_back(st);
  }
  j["stages"] = stages;
  return j;
}

json error_json(const std::string& kind, const std::string& message) {
  json e;
  e["kind"] = kind;
  e["message"] = message;
  return e;
}

struct Loaded {
  std::optional<StagedTree> tree;
  json error;
  int exit_code = kOk;
};

Loaded load(const std::string& path) {
  Loaded out;
  std::ifstream in(path);
  if (!in) {
    out.error = error_json("io", "cannot read " + path);
    out.exit_code = kUsage;
    return out;
  }
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    out.tree = tree::parse_tree(ss.str());
  } catch (const tree::ParseError& e) {
    out.error = error_json("parse", e.what());
    out.error["line"] = e.line();
    out.error["column"] = e.column();
    out.exit_code = kUsage;
  } catch (const tree::TreeError& e) {
    out.error = error_json("validation", e.what());
    out.error["rule"] = e.rule();
    out.exit_code = kInvalid;
  } catch (const algebra::StructuralError& e) {
    out.error = error_json("validation", e.what());
    out.exit_code = kInvalid;
  }
  return out;
}

bool within_oracle_budget(const StagedTree& t, const kernel::KernelConfig& cfg) {
  std::size_t labels = t.label_vars()->size() - 1;
  return t.num_leaves() <= cfg.max_leaves && labels <= cfg.max_labels;
}

// One pipeline stage: runs body, records status and time.
class Pipeline {
 public:
  explicit Pipeline(bool timings) : timings_(timings) {}

  // body returns the status string and fills detail.
  std::string run(const std::string& name, const std::function<std::string(json&)>& body) {
    json row;
    row["stage"] = name;
    json detail = json::object();
    auto t0 = std::chrono::steady_clock::now();
    std::string status;
    try {
      status = body(detail);
    } catch (const algebra::BudgetExceeded& e) {
      status = "budget";
      detail["message"] = e.what();
      budget_hit_ = true;
    }
    row["status"] = status;
    if (!detail.empty()) row["detail"] = detail;
    if (timings_)
      row["ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    rows_.push_back(row);
    return status;
  }
  void skip(const std::string& name) {
    json row;
    row["stage"] = name;
    row["status"] = "not-run";
    rows_.push_back(row);
  }
  const json& rows() const { return rows_; }
  bool budget_hit() const { return budget_hit_; }

 private:
  bool timings_;
  bool budget_hit_ = false;
  json rows_ = json::array();
};

}  // namespace

Limits parse_budget(const std::string& spec) {
  Limits l;
  if (spec.empty() || spec == "default") return l;
  if (spec == "small") {
    l.kernel.max_leaves = 12;
    l.kernel.max_labels = 8;
    l.random_trials = 20;
    return l;
  }
  if (spec == "large") {
    l.kernel.max_leaves = 32;
    l.kernel.max_labels = 20;
    l.kernel.max_graded_monomials = 200000;
    l.kernel.budget = algebra::Budget{50000, 64, 400000, 20000000};
    l.verify.budget = l.kernel.budget;
    l.random_trials = 200;
    return l;
  }
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("unknown budget profile: " + item);
    std::string key = item.substr(0, eq), val = item.substr(eq + 1);
    std::size_t v = parse_size(key, val);
    if (key == "leaves") {
      l.kernel.max_leaves = v;
    } else if (key == "labels") {
      l.kernel.max_labels = v;
    } else if (key == "trials") {
      l.random_trials = static_cast<int>(v);
    } else if (key == "basis") {
      l.kernel.budget.max_basis = l.verify.budget.max_basis = v;
    } else if (key == "terms") {
      l.kernel.budget.max_terms = l.verify.budget.max_terms = v;
    } else if (key == "degree") {
      l.kernel.budget.max_degree = l.verify.budget.max_degree = static_cast<int>(v);
    } else if (key == "pairs") {
      l.kernel.budget.max_pairs = l.verify.budget.max_pairs = v;
    } else if (key == "graded") {
      l.kernel.max_graded_monomials = v;
    } else {
      throw std::invalid_argument("unknown budget key: " + key);
    }
  }
  return l;
}

Result cmd_validate(const std::string& path) {
  Result r;
  r.report["schema"] = kSchema;
  r.report["command"] = "validate";
  r.report["file"] = path;
  auto loaded = load(path);
  r.report["valid"] = loaded.tree.has_value();
  if (loaded.tree) {
    r.report["tree"] = tree_json(*loaded.tree);
  } else {
    r.report["error"] = loaded.error;
    r.exit_code = loaded.exit_code;
  }
  return r;
}

Result cmd_analyze(const std::string& path, const Options& opt) {
  Result r;
  json& rep = r.report;
  rep["schema"] = kSchema;
  rep["command"] = "analyze";
  rep["file"] = path;
  rep["seed"] = opt.seed;
  auto loaded = load(path);
  if (!loaded.tree) {
    rep["error"] = loaded.error;
    r.exit_code = loaded.exit_code;
    return r;
  }
  const StagedTree& t = *loaded.tree;
  rep["tree"] = tree_json(t);

  std::vector<tree::LinearForm> supplied;
  if (opt.forms_path) {
    try {
      supplied = minors::load_forms(*opt.forms_path, t.num_leaves());
      if (supplied.size() != t.num_leaves())
        throw std::invalid_argument(std::to_string(supplied.size()) + " forms for " +
                                    std::to_string(t.num_leaves()) + " leaves");
    } catch (const std::exception& e) {
      rep["error"] = error_json("forms", e.what());
      r.exit_code = kUsage;
      return r;
    }
  }

  const auto& lim = opt.limits;
  Pipeline pipe(opt.timings);
  std::string classification = "unknown";
  std::optional<minors::ToricCertificate> cert;
  std::optional<balance::QuadraticBasis> qgb;
  json balance_json;

  auto done = [&] { return classification != "unknown"; };

  pipe.run("balanced", [&](json& d) {
    auto b = balance::is_balanced(t);
    balance_json["balanced"] = b.balanced;
    if (b.witness) {
      json w;
      w["u"] = t.vertex(b.witness->u).name;
      w["v"] = t.vertex(b.witness->v).name;
      w["i"] = b.witness->i;
      w["j"] = b.witness->j;
      balance_json["witness"] = w;
      return std::string("fail");
    }
    qgb = balance::quadratic_gb(t);
    d["generators"] = qgb->basis.generators.size();
    balance_json["quadratic_gb"] = polys(qgb->basis.generators);
    balance_json["is_groebner"] = qgb->is_groebner;
    classification = "balanced";
    return std::string("pass");
  });

  if (!supplied.empty() && !done()) {
    pipe.run("supplied-forms", [&](json&) {
      auto c = minors::verify_certificate(t, supplied, minors::ideal_of_minors(t), lim.verify);
      c.method = "supplied";
      bool ok = c.verified;
      cert = std::move(c);
      if (!ok) return std::string("fail");
      classification = "forms-certified";
      return std::string("pass");
    });
  } else {
    pipe.skip("supplied-forms");
  }

  if (!done()) {
    pipe.run("sip", [&](json& d) {
      auto s = sip::detect_sip(t);
      if (!s.sip) {
        if (s.witness) {
          d["stage"] = t.stage(s.witness->stage).id;
          d["vertex"] = t.vertex(s.witness->vertex).name;
        }
        return std::string("fail");
      }
      auto c = sip::sip_change_of_variables(t, lim.verify);
      bool ok = c.verified;
      cert = std::move(c);
      if (!ok) return std::string("fail");
      classification = "SIP";
      return std::string("pass");
    });
  } else {
    pipe.skip("sip");
  }

  if (!done()) {
    pipe.run("hybrid", [&](json&) {
      auto c = sip::hybrid_search(t, lim.verify);
      if (!c) return std::string("fail");
      cert = std::move(*c);
      classification = "hybrid";
      return std::string("pass");
    });
  } else {
    pipe.skip("hybrid");
  }

  auto os = onestage::classify_onestage(t);
  if (!done() && os.is_one_stage) {
    pipe.run("one-stage", [&](json& d) {
      d["k"] = os.k;
      d["d"] = os.d;
      d["caterpillar"] = os.is_caterpillar;
      d["span_rank"] = onestage::span_rank(t);
      d["veronese_dim"] = onestage::veronese_basis(os.k, os.d).monomials.size();
      auto c = onestage::veronese_certificate(t, lim.verify);
      if (!c.verified) return std::string("fail");
      cert = std::move(c);
      classification = "one-stage-certified";
      return std::string("pass");
    });
  } else {
    pipe.skip("one-stage");
  }

  if (!done()) {
    pipe.run("random", [&](json& d) {
      d["trials"] = lim.random_trials;
      auto c = minors::random_search(t, opt.seed, lim.random_trials, lim.verify);
      if (!c) return std::string("fail");
      cert = std::move(*c);
      classification = "randomized-certified";
      return std::string("pass");
    });
  } else {
    pipe.skip("random");
  }

  rep["classification"] = classification;
  rep["pipeline"] = pipe.rows();
  rep["balance"] = balance_json;
  if (cert && cert->verified)
    rep["certificate"] = certificate_json(t, *cert);
  else
    rep["certificate"] = nullptr;

  json oracle;
  if (opt.oracle == OracleMode::Off) {
    oracle["status"] = "off";
  } else if (opt.oracle == OracleMode::On && !within_oracle_budget(t, lim.kernel)) {
    oracle["status"] = "skipped";
    oracle["reason"] = "tree exceeds the oracle budget";
  } else {
    auto t0 = std::chrono::steady_clock::now();
    try {
      std::optional<algebra::GroebnerBasis> K;
      if (opt.oracle == OracleMode::CacheOnly) {
        if (!opt.cache_dir.empty()) K = kernel::kernel_ideal_cached(t, opt.cache_dir, true, lim.kernel);
      } else if (!opt.cache_dir.empty()) {
        K = kernel::kernel_ideal_cached(t, opt.cache_dir, false, lim.kernel);
      } else {
        K = kernel::kernel_ideal(t, lim.kernel);
      }
      if (!K) {
        oracle["status"] = "cache-miss";
      } else {
        oracle["generators"] = polys(K->generators);
        oracle["degrees"] = kernel::minimal_generator_degrees(*K, lim.kernel.budget);
        bool agree = true;
        if (classification == "balanced") {
          agree = kernel::ideal_equal(qgb->basis.generators, K->generators, lim.kernel.budget);
        } else if (cert && cert->verified) {
          agree = kernel::ideal_equal(minors::certificate_kernel(t, *cert, lim.verify.budget), K->generators,
                                      lim.kernel.budget);
        } else {
          oracle["minors_equal_kernel"] =
              kernel::ideal_equal(minors::ideal_of_minors(t), K->generators, lim.kernel.budget);
        }
        if (classification != "unknown") oracle["agrees"] = agree;
        oracle["status"] = classification == "unknown" ? "computed" : (agree ? "agree" : "disagree");
        if (!agree) r.exit_code = kDisagree;
      }
    } catch (const algebra::BudgetExceeded& e) {
      oracle["status"] = "budget";
      oracle["message"] = e.what();
      oracle["degree_reached"] = e.degree_reached();
    }
    if (opt.timings)
      oracle["ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  rep["oracle"] = oracle;

  if (r.exit_code == kOk && classification == "unknown" && pipe.budget_hit()) r.exit_code = kBudget;
  return r;
}

Result cmd_corpus(const std::string& dir, const Options& opt) {
  Result r;
  json& rep = r.report;
  rep["schema"] = kSchema;
  rep["command"] = "corpus";
  rep["directory"] = dir;
  rep["seed"] = opt.seed;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    rep["error"] = error_json("io", "not a directory: " + dir);
    r.exit_code = kUsage;
    return r;
  }
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".tree") files.push_back(e.path());
  std::sort(files.begin(), files.end());

  std::vector<json> rows(files.size());
  std::size_t next = 0;
  std::mutex m;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(m);
        if (next >= files.size()) return;
        i = next++;
      }
      Options o = opt;
      auto forms = files[i];
      forms.replace_extension(".forms");
      if (!o.forms_path && fs::exists(forms)) o.forms_path = forms.string();
      json row;
      row["file"] = files[i].filename().string();
      try {
        auto a = cmd_analyze(files[i].string(), o);
        if (a.report.contains("error")) {
          row["status"] = "error";
          row["error"] = a.report["error"];
        } else {
          row["status"] = "ok";
          row["classification"] = a.report["classification"];
          if (a.report["classification"] == "balanced")
            row["certificate"] = "quadratic-gb";
          else
            row["certificate"] = a.report["certificate"].is_null() ? "none" : "verified";
          row["oracle"] = a.report["oracle"]["status"];
          if (a.report["oracle"].contains("minors_equal_kernel"))
            row["minors_equal_kernel"] = a.report["oracle"]["minors_equal_kernel"];
        }
        row["exit_code"] = a.exit_code;
      } catch (const std::exception& e) {
        row["status"] = "error";
        row["error"] = error_json("internal", e.what());
        row["exit_code"] = kUsage;
      }
      rows[i] = row;
    }
  };
  unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), files.size()));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  json arr = json::array();
  std::size_t errors = 0, disagreements = 0;
  for (auto& row : rows) {
    if (row["status"] == "error") ++errors;
    if (row.contains("oracle") && row["oracle"] == "disagree") ++disagreements;
    arr.push_back(row);
  }
  rep["rows"] = arr;
  json summary;
  summary["files"] = rows.size();
  summary["errors"] = errors;
  summary["disagreements"] = disagreements;
  rep["summary"] = summary;
  r.exit_code = disagreements > 0 ? kDisagree : kOk;
  return r;
}

std::string render_text(const json& rep) {
  std::ostringstream out;
  out << rep.value("command", "") << " " << rep.value("file", "") << "\n";
  if (rep.contains("error")) {
    out << "error (" << rep["error"]["kind"].get<std::string>() << "): " << rep["error"]["message"].get<std::string>()
        << "\n";
    return out.str();
  }
  if (rep.contains("tree"))
    out << "leaves " << rep["tree"]["leaves"] << ", depth " << rep["tree"]["depth"] << ", stages "
        << rep["tree"]["stages"].size() << "\n";
  if (rep.contains("valid")) out << (rep["valid"].get<bool>() ? "valid" : "invalid") << "\n";
  if (!rep.contains("classification")) return out.str();
  out << "classification: " << rep["classification"].get<std::string>() << "\n";
  for (const auto& row : rep["pipeline"]) {
    out << "  " << std::left << std::setw(16) << row["stage"].get<std::string>() << row["status"].get<std::string>();
    if (row.contains("ms")) out << "  " << std::fixed << std::setprecision(1) << row["ms"].get<double>() << " ms";
    out << "\n";
  }
  if (rep["balance"].contains("quadratic_gb")) {
    out << "quadratic Groebner basis:\n";
    for (const auto& g : rep["balance"]["quadratic_gb"]) out << "  " << g.get<std::string>() << "\n";
  }
  if (!rep["certificate"].is_null()) {
    const auto& c = rep["certificate"];
    out << "certificate (" << c["method"].get<std::string>() << "):\n";
    for (std::size_t i = 0; i < c["forms"].size(); ++i)
      out << "  l" << i + 1 << " = " << c["forms"][i].get<std::string>() << "  ->  "
          << c["monomial_images"][i].get<std::string>() << "\n";
    out << "binomial generators:\n";
    for (const auto& g : c["binomial_generators"]) out << "  " << g.get<std::string>() << "\n";
  }
  const auto& o = rep["oracle"];
  out << "oracle: " << o["status"].get<std::string>();
  if (o.contains("minors_equal_kernel"))
    out << " (J_T " << (o["minors_equal_kernel"].get<bool>() ? "=" : "!=") << " kernel)";
  out << "\n";
  return out.str();
}

std::string render_table(const json& rep) {
  std::vector<std::array<std::string, 5>> rows = {{"file", "classification", "certificate", "oracle", "error"}};
  if (rep.contains("rows"))
    for (const auto& row : rep["rows"]) {
      std::array<std::string, 5> r;
      r[0] = row["file"].get<std::string>();
      if (row["status"] == "error") {
        r[1] = r[2] = r[3] = "-";
        r[4] = row["error"]["message"].get<std::string>();
      } else {
        r[1] = row["classification"].get<std::string>();
        r[2] = row["certificate"].get<std::string>();
        r[3] = row["oracle"].get<std::string>();
      }
      rows.push_back(r);
    }
  std::array<std::size_t, 5> w{};
  for (const auto& r : rows)
    for (std::size_t i = 0; i < 4; ++i) w[i] = std::max(w[i], r[i].size());
  std::string out;
  for (const auto& r : rows) {
    std::ostringstream line;
    for (std::size_t i = 0; i < 4; ++i) line << std::left << std::setw(static_cast<int>(w[i]) + 2) << r[i];
    line << r[4];
    std::string l = line.str();
    l.erase(l.find_last_not_of(' ') + 1);
    out += l + "\n";
  }
  return out;
}

}  // namespace staged::cli
