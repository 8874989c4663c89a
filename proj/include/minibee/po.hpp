#pragma once

#include "minibee/evaluator.hpp"
#include "minibee/explorer.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace minibee {

enum class PoKind : std::uint8_t { Initialisation, Preservation, DeadlockFreeness };

inline const char *to_string(PoKind k) {
  switch (k) {
  case PoKind::Initialisation:
    return "initialisation";
  case PoKind::Preservation:
    return "invariant-preservation";
  default:
    return "deadlock-freeness";
  }
}

/// hypothesis => [substitution] goal, with `params` free in all three and
/// ranging over their typing domains.
struct ProofObligation {
  PoKind kind = PoKind::Initialisation;
  std::string event; // preservation only
  std::vector<Param> params;
  PredPtr hypothesis;
  std::optional<Subst> substitution;
  PredPtr goal;
};

inline std::string render_po(const ProofObligation &po) {
  std::string out;
  if (po.hypothesis && po.hypothesis->kind != PredKind::True)
    out += to_string(po.hypothesis) + " => ";
  if (po.substitution)
    out += "[" + to_string(*po.substitution) + "] (" + to_string(po.goal) + ")";
  else
    out += to_string(po.goal);
  return out;
}

/// One initialisation PO, one preservation PO per event in declaration order,
/// then one deadlock-freeness PO.
inline std::vector<ProofObligation> generate_pos(const AbstractSystem &sys) {
  std::vector<ProofObligation> out;

  ProofObligation init;
  init.kind = PoKind::Initialisation;
  init.hypothesis = make_true();
  init.substitution = sys.init;
  init.goal = sys.invariant;
  out.push_back(std::move(init));

  for (const auto &ev : sys.events) {
    ProofObligation po;
    po.kind = PoKind::Preservation;
    po.event = ev.name;
    po.params = ev.params;
    po.hypothesis = make_pred(PredKind::And, {sys.invariant, ev.guard});
    po.substitution = ev.action;
    po.goal = sys.invariant;
    out.push_back(std::move(po));
  }

  ProofObligation dlf;
  dlf.kind = PoKind::DeadlockFreeness;
  dlf.hypothesis = sys.invariant;
  PredPtr some_guard;
  for (const auto &ev : sys.events) {
    PredPtr g = ev.guard;
    if (!ev.params.empty()) {
      auto ex = std::make_shared<Pred>();
      ex->kind = PredKind::Exists;
      ex->params = ev.params;
      ex->preds = {ev.guard};
      g = ex;
    }
    some_guard = some_guard ? make_pred(PredKind::Or, {some_guard, g}) : g;
  }
  dlf.goal = some_guard ? some_guard : make_pred(PredKind::False);
  out.push_back(std::move(dlf));
  return out;
}

enum class PoStatus : std::uint8_t { Pass, Fail, VacuousPass, Aborted };

inline const char *to_string(PoStatus s) {
  switch (s) {
  case PoStatus::Pass:
    return "pass";
  case PoStatus::Fail:
    return "fail";
  case PoStatus::VacuousPass:
    return "vacuous-pass";
  default:
    return "aborted";
  }
}

struct PoWitness {
  SysState state;
  Binding binding;
  std::optional<SysState> post;
  std::string note;
};

struct DischargeResult {
  PoStatus status = PoStatus::Pass;
  std::optional<PoWitness> witness;
  std::uint64_t states_examined = 0;
  std::uint64_t hypothesis_hits = 0;
  std::string message; // why the discharge was aborted
};

/// Discharges a PO by exhaustive evaluation over every well-typed state at the
/// model's scope. [GS]goal is evaluated as goal-after-executing-GS, which is
/// exact because substitutions are deterministic once the binding is fixed.
inline DischargeResult discharge_bounded(const ProofObligation &po, const Model &m,
                                         std::uint64_t ceiling = default_state_ceiling) {
  DischargeResult r;
  if (po.kind == PoKind::Initialisation) {
    r.states_examined = 1;
    r.hypothesis_hits = 1;
    SysState s;
    try {
      s = initial_state(m);
      if (!eval_pred(m, *po.goal, s))
        r.witness = PoWitness{s, {}, std::nullopt, "initial state violates the invariant"};
    } catch (const WellDefinednessError &e) {
      r.witness = PoWitness{s, {}, std::nullopt, e.what()};
    }
    r.status = r.witness ? PoStatus::Fail : PoStatus::Pass;
    return r;
  }

  require_within_ceiling(m, ceiling);
  for_each_typed_state(m, [&](const SysState &s) {
    ++r.states_examined;
    try {
      for_each_candidate(m, po.params, s, [&](const Binding &b) {
        bool hyp = false;
        try {
          hyp = eval_pred(m, *po.hypothesis, s, b);
        } catch (const WellDefinednessError &e) {
          r.witness = PoWitness{s, b, std::nullopt, std::string("hypothesis: ") + e.what()};
          return false;
        }
        if (!hyp)
          return true;
        ++r.hypothesis_hits;
        try {
          const SysState post = po.substitution ? apply_subst(m, *po.substitution, s, b) : s;
          if (!eval_pred(m, *po.goal, post, b)) {
            r.witness = PoWitness{s, b, po.substitution ? std::optional<SysState>(post) : std::nullopt,
                                  "goal is false"};
            return false;
          }
        } catch (const WellDefinednessError &e) {
          r.witness = PoWitness{s, b, std::nullopt, e.what()};
          return false;
        }
        return true;
      });
    } catch (const WellDefinednessError &e) {
      r.witness = PoWitness{s, {}, std::nullopt, std::string("parameter domain: ") + e.what()};
    }
    return !r.witness;
  });
  if (r.witness)
    r.status = PoStatus::Fail;
  else
    r.status = r.hypothesis_hits == 0 ? PoStatus::VacuousPass : PoStatus::Pass;
  return r;
}

struct PoOutcome {
  ProofObligation po;
  DischargeResult result;
};

/// Generates and discharges every PO; a state space over the ceiling marks
/// the affected POs aborted instead of throwing.
inline std::vector<PoOutcome> discharge_all(const Model &m, std::uint64_t ceiling = default_state_ceiling) {
  std::vector<PoOutcome> out;
  for (auto &po : generate_pos(m.system())) {
    DischargeResult r;
    try {
      r = discharge_bounded(po, m, ceiling);
    } catch (const StateSpaceTooLarge &e) {
      r.status = PoStatus::Aborted;
      r.message = e.what();
    }
    out.push_back({std::move(po), std::move(r)});
  }
  return out;
}

inline std::string witness_binding(const AbstractSystem &sys, const ProofObligation &po, const Binding &b) {
  std::string out;
  for (std::size_t i = 0; i < b.values.size() && i < po.params.size(); ++i)
    out += (i ? "," : "") + po.params[i].name + "=" + render_value(sys, b.values[i]);
  return out;
}

/// `kind [event] : status (states_examined)` per PO, witness blocks indented.
inline std::string render_po_report(const AbstractSystem &sys, const std::vector<PoOutcome> &outcomes) {
  std::ostringstream os;
  for (const auto &o : outcomes) {
    os << to_string(o.po.kind);
    if (!o.po.event.empty())
      os << ' ' << o.po.event;
    os << " : " << to_string(o.result.status) << " (" << o.result.states_examined << ")\n";
    if (o.result.status == PoStatus::Aborted)
      os << "  reason: " << o.result.message << '\n';
    if (const auto &w = o.result.witness) {
      os << "  witness state: " << render_state(sys, w->state) << '\n';
      if (!w->binding.empty())
        os << "  witness binding: " << witness_binding(sys, o.po, w->binding) << '\n';
      if (w->post)
        os << "  post state: " << render_state(sys, *w->post) << '\n';
      os << "  note: " << w->note << '\n';
    }
  }
  return os.str();
}

inline nlohmann::json po_report_json(const AbstractSystem &sys, const std::vector<PoOutcome> &outcomes) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto &o : outcomes) {
    nlohmann::json j;
    j["kind"] = to_string(o.po.kind);
    j["event"] = o.po.event.empty() ? nlohmann::json(nullptr) : nlohmann::json(o.po.event);
    j["formula"] = render_po(o.po);
    j["status"] = to_string(o.result.status);
    j["states_examined"] = o.result.states_examined;
    j["hypothesis_hits"] = o.result.hypothesis_hits;
    if (o.result.status == PoStatus::Aborted)
      j["reason"] = o.result.message;
    if (const auto &w = o.result.witness) {
      nlohmann::json wj;
      wj["state"] = render_state(sys, w->state);
      wj["binding"] = witness_binding(sys, o.po, w->binding);
      wj["post_state"] = w->post ? nlohmann::json(render_state(sys, *w->post)) : nlohmann::json(nullptr);
      wj["note"] = w->note;
      j["witness"] = wj;
    }
    arr.push_back(j);
  }
  return nlohmann::json{{"system", sys.name}, {"proof_obligations", arr}};
}

} // namespace minibee
