#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "hx/semantics.hpp"
#include "hx/theory.hpp"

namespace hx {

/// A query register and an answer register. stored(x), solved(x) are state
/// predicates, P(x,y) holds when y = g(x). Constants write : D -> C,
/// calc : C, read : D * C.
class QuerySolveModel : public StateModel {
 public:
  explicit QuerySolveModel(std::function<Nat(Nat)> g = [](Nat x) { return x + 1; });

  std::string name() const override { return "query_solve"; }
  std::optional<bool> state_atom(const Ident& p, std::span<const Nat> args, const State& s) const override;
  std::optional<bool> main_atom(const Ident& p, std::span<const Nat> args) const override;
  Outcome interp_const(const Ident& c, State s, Trace* trace) const override;
  std::vector<State> sample_states(std::uint64_t seed, std::size_t count) const override;
  nlohmann::json serialize(const State& s) const override;
  State deserialize(const nlohmann::json& j) const override;

  static State empty();
  Nat oracle(Nat x) const { return g_(x); }

 private:
  std::function<Nat(Nat)> g_;
};

/// Three slots. le(l,l') compares slots l and l' (1-based), sorted holds when
/// the slots are nondecreasing, swap12/swap13/swap23 exchange two slots.
class Swap3Model : public StateModel {
 public:
  std::string name() const override { return "swap3"; }
  std::optional<bool> state_atom(const Ident& p, std::span<const Nat> args, const State& s) const override;
  Outcome interp_const(const Ident& c, State s, Trace* trace) const override;
  std::vector<State> sample_states(std::uint64_t seed, std::size_t count) const override;
  Nat sample_d(std::mt19937_64& rng) const override;
  State deserialize(const nlohmann::json& j) const override;
  /// Provides the "swap_pair" realizer builder.
  void install(Theory& th) const override;

  /// All 27 states over {0,1,2}.
  static std::vector<State> all_small_states();
};

/// An array of M cells, indices clamped to the array. sort(N), psort(n,N),
/// comp(n) as in the insertion-sort theory; swap : D -> C exchanges cells n
/// and n+1.
class InsertionSortModel : public StateModel {
 public:
  explicit InsertionSortModel(std::size_t m = 16);

  std::string name() const override { return "insertion_sort"; }
  std::optional<bool> state_atom(const Ident& p, std::span<const Nat> args, const State& s) const override;
  Outcome interp_const(const Ident& c, State s, Trace* trace) const override;
  std::vector<State> sample_states(std::uint64_t seed, std::size_t count) const override;
  Nat sample_d(std::mt19937_64& rng) const override;
  State deserialize(const nlohmann::json& j) const override;

  std::size_t size() const { return m_; }
  bool sorted_prefix(const State& s, Nat n) const;
  bool psort(const State& s, Nat n, Nat big_n) const;
  bool comp(const State& s, Nat n) const;

 private:
  std::size_t m_;
};

using ModelFactory = std::function<std::shared_ptr<const StateModel>()>;

/// Adds a named model to the registry; replaces an existing entry.
void register_model(const std::string& name, ModelFactory f);
/// Throws Error for unknown names. "free" is always available.
std::shared_ptr<const StateModel> make_model(const std::string& name);
std::vector<std::string> model_names();

/// The model a theory names, or the free model.
std::shared_ptr<const StateModel> model_for(const Theory& th);
/// Attaches a model: records its name and installs its realizer builders.
void attach_model(Theory& th, const StateModel& m);

}  // namespace hx
