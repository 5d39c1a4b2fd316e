#include "hx/state_logic.hpp"

#include <algorithm>
#include <set>

#include "hx/print.hpp"

namespace hx {

namespace {

constexpr std::size_t kMaxAutoInstances = 100000;

StateFormula subst_all(const StateFormula& a, const Binding& b) {
  StateFormula r = a;
  // Parallel substitution: rename to placeholders first so bindings that
  // mention other metavariables are not captured.
  std::map<Ident, Ident> tmp;
  int i = 0;
  for (const auto& [k, _] : b) {
    Ident ph = "\x01mv" + std::to_string(i++);
    tmp[k] = ph;
    r = subst(r, k, Term::var(ph));
  }
  for (const auto& [k, v] : b) r = subst(r, tmp[k], v);
  return r;
}

void collect_subterms(const Term& t, std::set<Term>& out) {
  out.insert(t);
  if (!t.is_var())
    for (const auto& a : t.args()) collect_subterms(a, out);
}

void collect_terms(const StateFormula& a, std::set<Term>& out) {
  using K = StateFormula::Kind;
  switch (a.kind()) {
    case K::Top:
    case K::Bot:
      return;
    case K::Atom:
      for (const auto& t : a.args()) collect_subterms(t, out);
      return;
    default:
      collect_terms(a.lhs(), out);
      collect_terms(a.rhs(), out);
  }
}

void compile_into(const StateFormula& a, const std::vector<StateFormula>& atoms, tt::Program& p) {
  using K = StateFormula::Kind;
  switch (a.kind()) {
    case K::Top:
      p.ops.push_back({tt::OpCode::True});
      return;
    case K::Bot:
      p.ops.push_back({tt::OpCode::False});
      return;
    case K::Atom: {
      auto it = std::find(atoms.begin(), atoms.end(), a);
      if (it == atoms.end()) throw Error("internal: atom missing from table: " + to_string(a));
      p.ops.push_back({tt::OpCode::Atom, static_cast<std::uint32_t>(it - atoms.begin())});
      return;
    }
    case K::And:
      compile_into(a.lhs(), atoms, p);
      compile_into(a.rhs(), atoms, p);
      p.ops.push_back({tt::OpCode::And});
      return;
    case K::Or:
      compile_into(a.lhs(), atoms, p);
      compile_into(a.rhs(), atoms, p);
      p.ops.push_back({tt::OpCode::Or});
      return;
    case K::Imp:
      if (a.rhs().kind() == K::Bot) {
        compile_into(a.lhs(), atoms, p);
        p.ops.push_back({tt::OpCode::Not});
        return;
      }
      compile_into(a.lhs(), atoms, p);
      compile_into(a.rhs(), atoms, p);
      p.ops.push_back({tt::OpCode::Imp});
      return;
  }
}

StateFormula conj_all(const std::vector<StateFormula>& fs) {
  if (fs.empty()) return StateFormula::top();
  StateFormula r = fs.back();
  for (std::size_t i = fs.size() - 1; i-- > 0;) r = StateFormula::conj(fs[i], r);
  return r;
}

StateFormula as_implication(const StateSequent& s) {
  if (s.hyps.empty()) return s.goal;
  return StateFormula::imp(conj_all(s.hyps), s.goal);
}

const HAxiomSchema& find_schema(const std::vector<HAxiomSchema>& axioms, const Ident& name) {
  for (const auto& s : axioms)
    if (s.name == name) return s;
  throw Error("unknown state axiom '" + name + "'");
}

}  // namespace

void collect_atoms(const StateFormula& a, std::vector<StateFormula>& out) {
  using K = StateFormula::Kind;
  switch (a.kind()) {
    case K::Top:
    case K::Bot:
      return;
    case K::Atom:
      if (std::find(out.begin(), out.end(), a) == out.end()) out.push_back(a);
      return;
    default:
      collect_atoms(a.lhs(), out);
      collect_atoms(a.rhs(), out);
  }
}

tt::Program compile_formula(const StateFormula& a, const std::vector<StateFormula>& atoms) {
  tt::Program p;
  p.num_atoms = static_cast<int>(atoms.size());
  compile_into(a, atoms, p);
  p.finalize();
  return p;
}

StateSequent instantiate_haxiom(const HAxiomSchema& schema, const Binding& binding) {
  for (const auto& mv : schema.metavars) {
    auto it = binding.find(mv.name);
    if (it == binding.end())
      throw Error("state axiom '" + schema.name + "': metavariable '" + mv.name + "' is unbound");
    if (!mv.domain.empty() && std::find(mv.domain.begin(), mv.domain.end(), it->second) == mv.domain.end())
      throw Error("state axiom '" + schema.name + "': " + to_string(it->second) + " is outside the domain of '" +
                  mv.name + "'");
  }
  for (const auto& [k, _] : binding) {
    bool known = std::any_of(schema.metavars.begin(), schema.metavars.end(),
                             [&](const MetaVar& m) { return m.name == k; });
    if (!known) throw Error("state axiom '" + schema.name + "' has no metavariable '" + k + "'");
  }
  StateSequent out{{}, subst_all(schema.goal, binding)};
  for (const auto& h : schema.hyps) out.hyps.push_back(subst_all(h, binding));
  return out;
}

std::vector<StateSequent> collect_instances(const StateSequent& seq, const std::vector<HAxiomSchema>& axioms,
                                            const std::vector<AxiomHint>& hints, const StateLogicOptions& opts) {
  std::vector<StateSequent> out;
  auto add = [&](StateSequent s) {
    if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(std::move(s));
  };
  for (const auto& h : hints) add(instantiate_haxiom(find_schema(axioms, h.schema), h.binding));
  if (!opts.automatic) return out;

  std::vector<StateFormula> seq_atoms;
  std::set<Term> terms_set;
  for (const auto& h : seq.hyps) {
    collect_atoms(h, seq_atoms);
    collect_terms(h, terms_set);
  }
  collect_atoms(seq.goal, seq_atoms);
  collect_terms(seq.goal, terms_set);
  const std::vector<Term> terms(terms_set.begin(), terms_set.end());

  for (const auto& schema : axioms) {
    std::vector<const std::vector<Term>*> ranges;
    std::size_t count = 1;
    bool empty = false;
    for (const auto& mv : schema.metavars) {
      const auto* r = mv.domain.empty() ? &terms : &mv.domain;
      if (r->empty()) empty = true;
      ranges.push_back(r);
      count *= std::max<std::size_t>(r->size(), 1);
      if (count > kMaxAutoInstances) break;
    }
    if (empty || count > kMaxAutoInstances) continue;

    std::vector<std::size_t> idx(ranges.size(), 0);
    for (;;) {
      Binding b;
      for (std::size_t i = 0; i < ranges.size(); ++i) b.insert_or_assign(schema.metavars[i].name, (*ranges[i])[idx[i]]);
      StateSequent inst = instantiate_haxiom(schema, b);
      std::vector<StateFormula> inst_atoms;
      for (const auto& h : inst.hyps) collect_atoms(h, inst_atoms);
      collect_atoms(inst.goal, inst_atoms);
      bool relevant = std::all_of(inst_atoms.begin(), inst_atoms.end(), [&](const StateFormula& a) {
        return std::find(seq_atoms.begin(), seq_atoms.end(), a) != seq_atoms.end();
      });
      if (relevant) add(std::move(inst));
      // odometer step
      std::size_t k = 0;
      while (k < idx.size() && ++idx[k] == ranges[k]->size()) idx[k++] = 0;
      if (k == idx.size()) break;
    }
  }
  return out;
}

bool check_h(const StateSequent& seq, const std::vector<HAxiomSchema>& axioms, const std::vector<AxiomHint>& hints,
             const StateLogicOptions& opts) {
  auto instances = collect_instances(seq, axioms, hints, opts);
  std::vector<StateFormula> premises = seq.hyps;
  for (const auto& inst : instances) premises.push_back(as_implication(inst));
  StateFormula f = premises.empty() ? seq.goal : StateFormula::imp(conj_all(premises), seq.goal);

  std::vector<StateFormula> atoms;
  collect_atoms(f, atoms);
  if (static_cast<int>(atoms.size()) > opts.atom_limit)
    throw ResourceError("state sequent has " + std::to_string(atoms.size()) + " distinct atoms (limit " +
                        std::to_string(opts.atom_limit) + "): " + state_sequent_string(seq.hyps, seq.goal));
  tt::Program p = compile_formula(f, atoms);
  auto cex = opts.backend ? tt::find_falsifying(p, *opts.backend) : tt::find_falsifying(p);
  return !cex.has_value();
}

void check_h_or_fail(const StateSequent& seq, const std::vector<HAxiomSchema>& axioms,
                     const std::vector<AxiomHint>& hints, const StateLogicOptions& opts) {
  if (!check_h(seq, axioms, hints, opts))
    throw UnprovableSequent(seq, "unprovable state sequent: " + state_sequent_string(seq.hyps, seq.goal));
}

StateFormula swap_locations(const StateFormula& a, const Term& l, const Term& lp) {
  using K = StateFormula::Kind;
  switch (a.kind()) {
    case K::Top:
    case K::Bot:
      return a;
    case K::Atom: {
      std::vector<Term> args;
      for (const auto& t : a.args()) args.push_back(t == l ? lp : t == lp ? l : t);
      return StateFormula::atom(a.pred(), std::move(args));
    }
    case K::And:
      return StateFormula::conj(swap_locations(a.lhs(), l, lp), swap_locations(a.rhs(), l, lp));
    case K::Or:
      return StateFormula::disj(swap_locations(a.lhs(), l, lp), swap_locations(a.rhs(), l, lp));
    case K::Imp:
      return StateFormula::imp(swap_locations(a.lhs(), l, lp), swap_locations(a.rhs(), l, lp));
  }
  return a;
}

}  // namespace hx
