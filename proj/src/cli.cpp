#include "hx/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdlib>
#include <ostream>
#include <thread>

#include "hx/extract.hpp"
#include "hx/kernel.hpp"
#include "hx/models.hpp"
#include "hx/selftest.hpp"

#ifndef HX_CORPUS_DIR
#define HX_CORPUS_DIR "corpus"
#endif

namespace hx {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string span_string(const std::string& file, const Span& sp) {
  if (!sp.known()) return file;
  return file + ":" + std::to_string(sp.line) + ":" + std::to_string(sp.col) + "-" + std::to_string(sp.end_line) +
         ":" + std::to_string(sp.end_col);
}

/// Thrown for usage errors (exit code 2).
struct UsageError : Error {
  using Error::Error;
};

template <class F>
void parallel_for(std::size_t n, unsigned jobs, F&& f) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned j = 0; j < std::min<std::size_t>(jobs, n); ++j)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
  for (auto& t : pool) t.join();
}

Notation notation_of(const std::string& s) { return s == "unicode" ? Notation::Unicode : Notation::Ascii; }

Document load_target(const std::string& target, fs::path* file = nullptr) {
  fs::path p = resolve_target(target);
  if (file) *file = p;
  return load_document(p);
}

}  // namespace

std::uint64_t default_seed() {
  const char* s = std::getenv("HOARE_EXTRACT_SEED");
  if (!s || !*s) return 0;
  try {
    return std::stoull(s);
  } catch (const std::exception&) {
    throw UsageError(std::string("HOARE_EXTRACT_SEED is not a number: ") + s);
  }
}

ProofOutcome check_named(const Document& doc, const NamedProof& p) {
  ProofOutcome out;
  try {
    if (p.pl) {
      MainFormula a = check_pl(*p.deriv, doc.theory, p.ctx);
      if (p.pl_goal && !alpha_eq(a, *p.pl_goal)) {
        out.diagnostic = span_string(p.file, p.span) + ": error: proof '" + p.name + "' proves " + to_string(a) +
                         ", not the stated " + to_string(*p.pl_goal);
        return out;
      }
    }
    // PL proofs are realized through their embedding at the trivial state formula.
    Checked c = p.pl ? check_and_extract(*embed_pl(p.deriv, StateFormula::top()), doc.theory,
                                         embed_context(p.ctx, StateFormula::top()))
                     : check_and_extract(*p.deriv, doc.theory, p.ctx);
    if (p.goal && !alpha_eq(c.triple, *p.goal)) {
      out.diagnostic = span_string(p.file, p.span) + ": error: proof '" + p.name + "' proves " +
                       to_string(c.triple) + ", not the stated " + to_string(*p.goal);
      return out;
    }
    out.ok = true;
    out.triple = c.triple;
    out.realizer = c.realizer;
  } catch (const KernelError& e) {
    out.diagnostic = span_string(p.file, e.span) + ": error[" + kind_name(e.kind) + "]: " + rule_keyword(e.rule) +
                     ": " + e.what() + " (in proof '" + p.name + "')";
  } catch (const Error& e) {
    out.diagnostic = span_string(p.file, p.span) + ": error: " + e.what() + " (in proof '" + p.name + "')";
  }
  return out;
}

std::string conclusion_string(const NamedProof& p, const Triple& t, Notation n) {
  if (!p.pl) return to_string(p.ctx, t, n);
  std::string s;
  for (std::size_t i = 0; i < p.ctx.entries().size(); ++i)
    s += (i ? ", " : "") + p.ctx.entries()[i].label + ": " + to_string(p.ctx.entries()[i].formula, n);
  if (!s.empty()) s += " ";
  return s + (n == Notation::Unicode ? "⊢ " : "|- ") + to_string(t.body, n);
}

StTerm display_term(const StTerm& t, const Document& doc, const NamedProof& p, const DisplayOptions& o) {
  StTerm r = t;
  if (o.cleanup) r = cleanup_admin(r);
  if (o.simplify) r = simplify_units(r, extraction_context(r, p.ctx), doc.theory.st_env());
  return r;
}

fs::path resolve_target(const std::string& target) {
  fs::path p(target);
  std::vector<fs::path> tries{p, fs::path(target + ".slp"), fs::path(HX_CORPUS_DIR) / (target + ".slp"),
                              fs::path(HX_CORPUS_DIR) / (p.filename().string() + ".slp")};
  for (const auto& c : tries)
    if (fs::is_regular_file(c)) return c;
  throw UsageError("no proof file '" + target + "'");
}

const NamedProof& select_proof(const Document& doc, const fs::path& file, const std::optional<std::string>& name) {
  if (name) {
    if (const NamedProof* p = doc.find(*name)) return *p;
    throw UsageError("no proof named '" + *name + "'");
  }
  if (const NamedProof* p = doc.find(file.stem().string())) return *p;
  if (doc.proofs.size() == 1) return doc.proofs.front();
  if (doc.proofs.empty()) throw UsageError("'" + file.string() + "' declares no proofs");
  throw UsageError("'" + file.string() + "' declares several proofs; choose one with --proof");
}

namespace {

int cmd_check(const std::vector<std::string>& files, const std::string& notation, unsigned jobs, std::ostream& out,
              std::ostream& err) {
  int rc = 0;
  std::vector<std::pair<const Document*, const NamedProof*>> work;
  std::vector<Document> docs;
  docs.reserve(files.size());
  for (const auto& f : files) {
    try {
      docs.push_back(load_target(f));
    } catch (const UsageError&) {
      throw;
    } catch (const Error& e) {
      err << e.what() << "\n";
      rc = 2;
    }
  }
  for (const auto& d : docs)
    for (const auto& p : d.proofs) work.emplace_back(&d, &p);
  std::vector<ProofOutcome> results(work.size());
  parallel_for(work.size(), jobs, [&](std::size_t i) { results[i] = check_named(*work[i].first, *work[i].second); });
  for (std::size_t i = 0; i < work.size(); ++i) {
    const auto& r = results[i];
    if (r.ok) {
      if (work.size() > 1) out << work[i].second->name << ": ";
      out << conclusion_string(*work[i].second, *r.triple, notation_of(notation))
          << " ok\n";
    } else {
      err << r.diagnostic << "\n";
      rc = std::max(rc, 1);
    }
  }
  return rc;
}

struct Selected {
  Document doc;
  fs::path file;
  const NamedProof* proof = nullptr;
  ProofOutcome outcome;
};

/// Loads, selects and checks; returns the exit code on failure.
std::optional<int> select_checked(Selected& s, const std::string& target, const std::optional<std::string>& name,
                                  std::ostream& err) {
  try {
    s.doc = load_target(target, &s.file);
  } catch (const UsageError&) {
    throw;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 2;
  }
  s.proof = &select_proof(s.doc, s.file, name);
  s.outcome = check_named(s.doc, *s.proof);
  if (!s.outcome.ok) {
    err << s.outcome.diagnostic << "\n";
    return 1;
  }
  return std::nullopt;
}

int cmd_extract(const std::string& target, const std::optional<std::string>& name, bool all, const DisplayOptions& o,
                const std::string& format, const std::string& notation, std::ostream& out, std::ostream& err) {
  if (all) {
    fs::path file;
    Document doc;
    try {
      doc = load_target(target, &file);
    } catch (const UsageError&) {
      throw;
    } catch (const Error& e) {
      err << e.what() << "\n";
      return 2;
    }
    int rc = 0;
    json arr = json::array();
    for (const auto& p : doc.proofs) {
      ProofOutcome r = check_named(doc, p);
      if (!r.ok) {
        err << r.diagnostic << "\n";
        rc = 1;
        continue;
      }
      StTerm t = display_term(*r.realizer, doc, p, o);
      if (format == "json")
        arr.push_back({{"proof", p.name}, {"term", to_json(t)}});
      else
        out << p.name << ": " << to_string(t, StPrintOptions{notation_of(notation), false}) << "\n";
    }
    if (format == "json") out << arr.dump() << "\n";
    return rc;
  }
  Selected s;
  if (auto rc = select_checked(s, target, name, err)) return *rc;
  StTerm t = display_term(*s.outcome.realizer, s.doc, *s.proof, o);
  if (format == "json") {
    json j{{"proof", s.proof->name}, {"term", to_json(t)}};
    try {
      j["type"] = to_json(typecheck(extraction_context(t, s.proof->ctx), t, s.doc.theory.st_env()));
    } catch (const TypeError&) {
      // Display rewrites may leave a term outside the typed fragment.
    }
    out << j.dump() << "\n";
  } else {
    out << to_string(t, StPrintOptions{notation_of(notation), false}) << "\n";
  }
  return 0;
}

json trace_json(const Trace& tr, const StateModel& m) {
  json arr = json::array();
  for (const auto& e : tr)
    arr.push_back({{"constant", e.constant}, {"args", e.args}, {"before", m.serialize(e.before)},
                   {"after", m.serialize(e.after)}});
  return arr;
}

int cmd_run(const std::string& target, const std::optional<std::string>& name, const std::optional<std::string>& model,
            const std::optional<std::string>& state, const std::vector<std::uint64_t>& args, bool trace,
            std::ostream& out, std::ostream& err) {
  Selected s;
  if (auto rc = select_checked(s, target, name, err)) return *rc;
  if (!s.proof->ctx.empty()) throw UsageError("run needs a proof without hypotheses");
  std::shared_ptr<const StateModel> owned;
  const StateModel* m = &s.doc.semantics();
  if (model) {
    owned = make_model(*model);
    m = owned.get();
  }
  const Theory& th = s.doc.theory;
  StTerm t = free_var_ground(*s.outcome.realizer, th, {});
  StType ty = typecheck({}, t, th.st_env());
  State st;
  try {
    st = state ? m->deserialize(json::parse(*state)) : m->sample_states(default_seed(), 1).front();
  } catch (const json::exception& e) {
    throw UsageError(std::string("--state is not valid JSON: ") + e.what());
  } catch (const Error& e) {
    throw UsageError(std::string("--state: ") + e.what());
  }
  Trace tr;
  EvalCtx cx{m, &th.sig, trace ? &tr : nullptr};
  auto [v, s1] = eval({}, t, st, cx);
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (ty.kind() != StType::Kind::Arrow || ty.left().kind() != StType::Kind::D)
      throw UsageError("the realizer has type " + to_string(ty) + " and takes " + std::to_string(i) +
                       " numeric arguments, " + std::to_string(args.size()) + " given");
    std::tie(v, s1) = apply(v, Value::nat(args[i]), s1, cx);
    ty = ty.right();
  }
  json j{{"value", value_json_erased(v)}, {"state", m->serialize(s1)}};
  if (trace) j["trace"] = trace_json(tr, *m);
  out << j.dump() << "\n";
  return 0;
}

int cmd_verify(const std::string& target, const std::optional<std::string>& name,
               const std::optional<std::string>& model, std::size_t samples, std::uint64_t seed, bool json_only,
               std::ostream& out, std::ostream& err) {
  Selected s;
  if (auto rc = select_checked(s, target, name, err)) return *rc;
  std::shared_ptr<const StateModel> owned;
  const StateModel* m = &s.doc.semantics();
  if (model) {
    owned = make_model(*model);
    m = owned.get();
  }
  Budget b;
  b.states = samples;
  b.seed = seed;
  RealizeReport r = check_realizes(*s.outcome.realizer, *s.outcome.triple, s.doc.theory, *m, b, s.proof->ctx);
  json j{{"proof", s.proof->name},
         {"model", m->name()},
         {"seed", seed},
         {"samples", samples},
         {"verdict", verdict_name(r.verdict)},
         {"states_checked", r.states_checked}};
  if (!r.detail.empty()) j["detail"] = r.detail;
  if (!r.counterexample.is_null()) j["counterexample"] = r.counterexample;
  if (!json_only) {
    out << s.proof->name << ": " << verdict_name(r.verdict) << " (" << r.states_checked << " states checked)";
    if (!r.detail.empty()) out << ": " << r.detail;
    out << "\n";
    if (!r.counterexample.is_null()) out << "counterexample: " << r.counterexample.dump() << "\n";
  }
  out << j.dump() << "\n";
  return r.verdict == Verdict::Pass ? 0 : 1;
}

int cmd_selftest(const std::string& corpus, std::uint64_t seed, unsigned jobs, std::ostream& out) {
  SelftestOptions o;
  o.corpus = corpus;
  o.seed = seed;
  o.jobs = jobs;
  bool all = true;
  for (const auto& r : run_acceptance(o, &out)) all = all && r.pass;
  return all ? 0 : 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Proof checker and program extractor for stateful Hoare-style proofs", "hoare-extract"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hoare-extract 1.0");

  std::vector<std::string> files;
  std::string notation_check = "unicode", notation_extract = "ascii", format = "text";
  std::string target;
  std::optional<std::string> proof, model, state;
  std::vector<std::uint64_t> run_args;
  bool trace = false, all = false, json_only = false;
  DisplayOptions disp;
  std::size_t samples = 100;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  std::string corpus = HX_CORPUS_DIR;

  auto* check = app.add_subcommand("check", "Kernel-check every proof in the given files");
  check->add_option("files", files, "Proof files or corpus names")->required();
  check->add_option("--notation", notation_check, "ascii or unicode")->check(CLI::IsMember({"ascii", "unicode"}));
  check->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  auto* extract = app.add_subcommand("extract", "Print the realizer extracted from a proof");
  extract->add_option("target", target, "Proof file or corpus name")->required();
  extract->add_option("--proof", proof, "Proof name");
  extract->add_flag("--all", all, "Every proof in the file");
  extract->add_flag("--simplify-units", disp.simplify, "Erase unit components");
  extract->add_flag("--cleanup-admin", disp.cleanup, "Contract administrative redexes");
  extract->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  extract->add_option("--notation", notation_extract, "ascii or unicode")->check(CLI::IsMember({"ascii", "unicode"}));

  auto* run = app.add_subcommand("run", "Evaluate an extracted realizer on a state");
  run->add_option("target", target, "Proof file or corpus name")->required();
  run->add_option("--proof", proof, "Proof name");
  run->add_option("--model", model, "State model");
  run->add_option("--state", state, "Initial state as JSON");
  run->add_option("--args", run_args, "Numeric arguments");
  run->add_flag("--trace", trace, "Log every constant application");

  auto* verify = app.add_subcommand("verify", "Test realizability of a proof's conclusion on sampled states");
  verify->add_option("target", target, "Proof file or corpus name")->required();
  verify->add_option("--proof", proof, "Proof name");
  verify->add_option("--model", model, "State model");
  verify->add_option("--samples", samples, "States to sample")->check(CLI::PositiveNumber);
  verify->add_option("--seed", seed, "Sampling seed");
  verify->add_flag("--json", json_only, "Print only the JSON report");

  auto* selftest = app.add_subcommand("selftest", "Run the acceptance suite");
  selftest->add_option("--corpus", corpus, "Corpus directory");
  selftest->add_option("--seed", seed, "Base seed");
  selftest->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  std::vector<std::string> rev(argv.rbegin(), argv.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*check) return cmd_check(files, notation_check, jobs, out, err);
    if (*extract) return cmd_extract(target, proof, all, disp, format, notation_extract, out, err);
    if (*run) return cmd_run(target, proof, model, state, run_args, trace, out, err);
    if (*verify) return cmd_verify(target, proof, model, samples, seed.value_or(default_seed()), json_only, out, err);
    if (*selftest) return cmd_selftest(corpus, seed.value_or(default_seed()), jobs, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << e.what() << "\n";
    return 2;
  } catch (const EvalError& e) {
    err << "error: evaluation failed: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace hx
