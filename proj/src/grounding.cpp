#include "peorl/grounding.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <ostream>
#include <sstream>

namespace peorl {

namespace {

std::string make_ground_name(const std::string& base, const std::vector<Constant>& args) {
    if (args.empty()) return base;
    std::string s = base + "(";
    for (size_t i = 0; i < args.size(); ++i) {
        if (i) s += ",";
        s += args[i].to_string();
    }
    return s + ")";
}

// Iterates the cartesian product of sort element lists.
class ProductIterator {
public:
    explicit ProductIterator(std::vector<const std::vector<Constant>*> domains)
        : domains_(std::move(domains)), idx_(domains_.size(), 0) {
        done_ = std::any_of(domains_.begin(), domains_.end(),
                            [](const auto* d) { return d->empty(); });
    }

    bool done() const { return done_; }

    std::vector<Constant> current() const {
        std::vector<Constant> out;
        out.reserve(domains_.size());
        for (size_t i = 0; i < domains_.size(); ++i) out.push_back((*domains_[i])[idx_[i]]);
        return out;
    }

    void next() {
        for (size_t i = domains_.size(); i-- > 0;) {
            if (++idx_[i] < domains_[i]->size()) return;
            idx_[i] = 0;
        }
        done_ = true;
    }

private:
    std::vector<const std::vector<Constant>*> domains_;
    std::vector<size_t> idx_;
    bool done_;
};

struct LawGrounder {
    const ActionDescription& desc;
    GroundDomain& g;
    const GroundConfig& cfg;
    size_t instance_count = 0;

    std::map<std::string, const SortDecl*> sorts;

    explicit LawGrounder(const ActionDescription& d, GroundDomain& gd, const GroundConfig& c)
        : desc(d), g(gd), cfg(c) {
        for (const auto& s : d.sorts) sorts[s.name] = &s;
    }

    const std::vector<Constant>& sort_elements(const std::string& name) const {
        auto it = sorts.find(name);
        if (it == sorts.end()) throw GroundingError("unknown sort '" + name + "'");
        return it->second->elements;
    }

    // Variable sorts for one law, inferred from plain occurrences.
    std::map<std::string, std::string> infer_var_sorts(const CausalLaw& law) const {
        std::map<std::string, std::string> out;
        auto scan_atom = [&](const FluentAtom& atom) {
            const FluentDecl* decl = desc.find_fluent(atom.fluent);
            if (!decl) throw GroundingError("undeclared fluent '" + atom.fluent + "'");
            for (size_t i = 0; i < atom.args.size(); ++i)
                if (atom.args[i].is_var() && atom.args[i].offset == 0)
                    out.emplace(atom.args[i].var, decl->arg_sorts[i]);
            if (atom.value.is_var() && atom.value.offset == 0)
                out.emplace(atom.value.var, decl->value_sort);
        };
        if (law.action) {
            const ActionDecl* decl = desc.find_action(law.action->name);
            if (!decl) throw GroundingError("undeclared action '" + law.action->name + "'");
            for (size_t i = 0; i < law.action->args.size(); ++i)
                if (law.action->args[i].is_var() && law.action->args[i].offset == 0)
                    out.emplace(law.action->args[i].var, decl->arg_sorts[i]);
        }
        for (const auto& a : law.body) scan_atom(a);
        if (law.head) scan_atom(*law.head);
        return out;
    }

    // Substitutes an assignment into a term; integer arithmetic applies the
    // offset. Returns false when the variable is unbound (validated earlier).
    bool subst(const Term& t, const std::map<std::string, Constant>& env, Constant& out) const {
        if (t.kind == Term::Kind::Const) {
            out = t.value;
            return true;
        }
        auto it = env.find(t.var);
        if (it == env.end()) return false;
        out = it->second;
        if (t.offset != 0) {
            if (out.kind != Constant::Kind::Int) return false;
            out = Constant::integer(out.num + t.offset);
        }
        return true;
    }

    // Instantiates one atom; returns false when any term lands outside its
    // sort (the whole law instance is dropped).
    bool instantiate_atom(const FluentAtom& atom, const std::map<std::string, Constant>& env,
                          GroundAtom& out) const {
        std::vector<Constant> args(atom.args.size());
        for (size_t i = 0; i < atom.args.size(); ++i)
            if (!subst(atom.args[i], env, args[i])) return false;
        int fid = g.fluent_id(make_ground_name(atom.fluent, args));
        if (fid < 0) return false;
        Constant value;
        if (!subst(atom.value, env, value)) return false;
        int vid = g.value_id(fid, value);
        if (vid < 0) return false;
        out.fluent = fid;
        out.value = vid;
        return true;
    }

    bool instantiate_action(const ActionTerm& at, const std::map<std::string, Constant>& env,
                            int& out) const {
        std::vector<Constant> args(at.args.size());
        for (size_t i = 0; i < at.args.size(); ++i)
            if (!subst(at.args[i], env, args[i])) return false;
        out = g.action_id(make_ground_name(at.name, args));
        return out >= 0;
    }

    void ground_law(int law_index, const CausalLaw& law) {
        if (law.kind == CausalLaw::Kind::Inertial) {
            for (size_t f = 0; f < g.fluents.size(); ++f) {
                const GroundFluent& gf = g.fluents[f];
                if (desc.fluents[gf.decl_index].name == law.inertial_fluent)
                    g.inertial[f] = true;
            }
            return;
        }

        auto var_sorts = infer_var_sorts(law);
        std::vector<std::string> vars;
        std::vector<const std::vector<Constant>*> domains;
        for (const auto& [v, sort] : var_sorts) {
            vars.push_back(v);
            domains.push_back(&sort_elements(sort));
        }

        for (ProductIterator it(domains); !it.done(); it.next()) {
            if (++instance_count > cfg.max_law_instances) {
                std::ostringstream os;
                os << "ground instance cap exceeded: more than " << cfg.max_law_instances
                   << " law instances (" << g.fluents.size() << " fluents, " << g.actions.size()
                   << " actions); raise GroundConfig.max_law_instances if intended";
                throw GroundingError(os.str());
            }
            std::map<std::string, Constant> env;
            auto values = it.current();
            for (size_t i = 0; i < vars.size(); ++i) env[vars[i]] = values[i];

            GroundLaw gl;
            gl.kind = law.kind;
            gl.source_law = law_index;
            bool viable = true;
            if (law.action) viable = instantiate_action(*law.action, env, gl.action);
            if (viable && law.head) viable = instantiate_atom(*law.head, env, gl.head);
            for (const auto& atom : law.body) {
                if (!viable) break;
                GroundAtom ga;
                viable = instantiate_atom(atom, env, ga);
                if (viable) gl.body.push_back(ga);
            }
            if (!viable) continue;

            int idx = static_cast<int>(g.laws.size());
            g.laws.push_back(std::move(gl));
            switch (law.kind) {
                case CausalLaw::Kind::Dynamic:
                    g.dynamic_by_action[g.laws[idx].action].push_back(idx);
                    break;
                case CausalLaw::Kind::Nonexecutable:
                    g.nonexecutable_by_action[g.laws[idx].action].push_back(idx);
                    break;
                case CausalLaw::Kind::Static:
                    g.static_laws.push_back(idx);
                    break;
                case CausalLaw::Kind::Default: {
                    const GroundAtom& h = g.laws[idx].head;
                    g.default_value[h.fluent] = h.value;
                    break;
                }
                case CausalLaw::Kind::Inertial:
                    break;
            }
        }
    }
};

bool holds(const SymbolicState& s, const GroundAtom& a) { return s.v[a.fluent] == a.value; }

bool body_holds(const SymbolicState& s, const GroundLaw& law) {
    for (const auto& a : law.body)
        if (!holds(s, a)) return false;
    return true;
}

// Shared completion: defaults then static closure over a partial assignment
// (-1 = unset). Used by initial_state; successor runs its own pipeline.
void apply_defaults(const GroundDomain& g, std::vector<std::int32_t>& v) {
    for (size_t f = 0; f < v.size(); ++f)
        if (v[f] < 0 && g.default_value[f] >= 0) v[f] = g.default_value[f];
}

// Closure over the partial assignment: a static law fires when its whole
// body is set and satisfied. Derives unset heads; a differing set head is a
// contradiction.
void static_closure(const GroundDomain& g, std::vector<std::int32_t>& v) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (int li : g.static_laws) {
            const GroundLaw& law = g.laws[li];
            bool applicable = true;
            for (const auto& a : law.body) {
                if (v[a.fluent] != a.value) {
                    applicable = false;
                    break;
                }
            }
            if (!applicable) continue;
            std::int32_t& slot = v[law.head.fluent];
            if (slot < 0) {
                slot = law.head.value;
                changed = true;
            } else if (slot != law.head.value) {
                throw GroundingError("contradictory: static law '" + g.atom_string(law.head) +
                                     " if ...' clashes with assigned value of '" +
                                     g.fluents[law.head.fluent].name + "'");
            }
        }
    }
}

}  // namespace

int GroundDomain::fluent_id(const std::string& name) const {
    auto it = fluent_index.find(name);
    return it == fluent_index.end() ? -1 : it->second;
}

int GroundDomain::action_id(const std::string& name) const {
    auto it = action_index.find(name);
    return it == action_index.end() ? -1 : it->second;
}

int GroundDomain::value_id(int fluent, const Constant& value) const {
    const auto& vals = fluents[fluent].values;
    for (size_t i = 0; i < vals.size(); ++i)
        if (vals[i] == value) return static_cast<int>(i);
    return -1;
}

GroundAtom GroundDomain::resolve_atom(const FluentAtom& atom) const {
    for (const auto& a : atom.args)
        if (a.is_var()) throw GroundingError("atom '" + atom.to_string() + "' is not ground");
    if (atom.value.is_var()) throw GroundingError("atom '" + atom.to_string() + "' is not ground");
    std::vector<Constant> args;
    for (const auto& a : atom.args) args.push_back(a.value);
    int fid = fluent_id(make_ground_name(atom.fluent, args));
    if (fid < 0) throw GroundingError("unknown ground fluent '" + atom.to_string() + "'");
    int vid = value_id(fid, atom.value.value);
    if (vid < 0)
        throw GroundingError("value '" + atom.value.to_string() + "' not in the domain of '" +
                             fluents[fid].name + "'");
    return {fid, vid};
}

std::string GroundDomain::atom_string(const GroundAtom& a) const {
    const GroundFluent& f = fluents[a.fluent];
    if (f.is_boolean) return (a.value == 1 ? "" : "~") + f.name;
    return f.name + "=" + f.values[a.value].to_string();
}

std::string GroundDomain::state_string(const SymbolicState& s) const {
    std::string out;
    for (size_t f = 0; f < fluents.size(); ++f) {
        if (fluents[f].is_boolean && s.v[f] == 0) continue;  // false-by-omission
        if (!out.empty()) out += ",";
        out += atom_string({static_cast<int>(f), s.v[f]});
    }
    return out;
}

GroundDomain ground(const ActionDescription& desc, const GroundConfig& cfg) {
    GroundDomain g;

    std::map<std::string, const SortDecl*> sorts;
    for (const auto& s : desc.sorts) sorts[s.name] = &s;
    auto elements_of = [&](const std::string& name) -> const std::vector<Constant>& {
        auto it = sorts.find(name);
        if (it == sorts.end()) throw GroundingError("unknown sort '" + name + "'");
        return it->second->elements;
    };

    static const std::vector<Constant> kBooleans = {Constant::boolean(false),
                                                    Constant::boolean(true)};

    for (size_t d = 0; d < desc.fluents.size(); ++d) {
        const FluentDecl& decl = desc.fluents[d];
        std::vector<const std::vector<Constant>*> argdoms;
        for (const auto& s : decl.arg_sorts) argdoms.push_back(&elements_of(s));
        for (ProductIterator it(argdoms); !it.done(); it.next()) {
            GroundFluent gf;
            gf.decl_index = static_cast<int>(d);
            gf.args = it.current();
            gf.name = make_ground_name(decl.name, gf.args);
            gf.is_boolean = decl.is_boolean();
            gf.values = gf.is_boolean ? kBooleans : elements_of(decl.value_sort);
            g.fluent_index[gf.name] = static_cast<int>(g.fluents.size());
            g.fluents.push_back(std::move(gf));
        }
    }
    for (size_t d = 0; d < desc.actions.size(); ++d) {
        const ActionDecl& decl = desc.actions[d];
        std::vector<const std::vector<Constant>*> argdoms;
        for (const auto& s : decl.arg_sorts) argdoms.push_back(&elements_of(s));
        for (ProductIterator it(argdoms); !it.done(); it.next()) {
            GroundAction ga;
            ga.decl_index = static_cast<int>(d);
            ga.args = it.current();
            ga.name = make_ground_name(decl.name, ga.args);
            g.action_index[ga.name] = static_cast<int>(g.actions.size());
            g.actions.push_back(std::move(ga));
        }
    }

    g.dynamic_by_action.resize(g.actions.size());
    g.nonexecutable_by_action.resize(g.actions.size());
    g.inertial.assign(g.fluents.size(), false);
    g.default_value.assign(g.fluents.size(), -1);

    LawGrounder grounder(desc, g, cfg);
    for (size_t i = 0; i < desc.laws.size(); ++i)
        grounder.ground_law(static_cast<int>(i), desc.laws[i]);
    return g;
}

SymbolicState initial_state(const GroundDomain& g, const std::vector<GroundAtom>& partial) {
    std::vector<std::int32_t> v(g.fluents.size(), -1);
    for (const auto& a : partial) {
        if (v[a.fluent] >= 0 && v[a.fluent] != a.value)
            throw GroundingError("contradictory: '" + g.fluents[a.fluent].name +
                                 "' assigned two different values");
        v[a.fluent] = a.value;
    }
    apply_defaults(g, v);
    static_closure(g, v);
    std::string missing;
    for (size_t f = 0; f < v.size(); ++f)
        if (v[f] < 0) missing += (missing.empty() ? "" : ", ") + g.fluents[f].name;
    if (!missing.empty()) throw GroundingError("incomplete: no value for " + missing);
    return SymbolicState{std::move(v)};
}

SymbolicState initial_state(const GroundDomain& g, const std::vector<FluentAtom>& partial) {
    std::vector<GroundAtom> atoms;
    atoms.reserve(partial.size());
    for (const auto& a : partial) atoms.push_back(g.resolve_atom(a));
    return initial_state(g, atoms);
}

std::optional<SymbolicState> successor(const GroundDomain& g, const SymbolicState& s, int action) {
    for (int li : g.nonexecutable_by_action[action])
        if (body_holds(s, g.laws[li])) return std::nullopt;

    std::vector<std::int32_t> next(g.fluents.size(), -1);
    for (int li : g.dynamic_by_action[action]) {
        const GroundLaw& law = g.laws[li];
        if (!body_holds(s, law)) continue;
        std::int32_t& slot = next[law.head.fluent];
        if (slot >= 0 && slot != law.head.value)
            throw GroundingError("conflict: two dynamic laws assign different values to '" +
                                 g.fluents[law.head.fluent].name + "' for action '" +
                                 g.actions[action].name + "'");
        slot = law.head.value;
    }
    for (size_t f = 0; f < next.size(); ++f)
        if (next[f] < 0 && g.inertial[f]) next[f] = s.v[f];
    apply_defaults(g, next);
    static_closure(g, next);
    for (size_t f = 0; f < next.size(); ++f)
        if (next[f] < 0)
            throw GroundingError("no value for '" + g.fluents[f].name + "' after action '" +
                                 g.actions[action].name +
                                 "' (not inertial, no default, no effect)");
    return SymbolicState{std::move(next)};
}

namespace {

ReachableGraph enumerate_impl(const GroundDomain& g, const SymbolicState& I,
                              const EnumerateLimits& limits, bool throw_on_cap) {
    ReachableGraph graph;
    graph.states.push_back(I);
    graph.index.emplace(I, 0);

    std::vector<std::vector<Transition>> per_state_out;
    per_state_out.emplace_back();

    for (size_t head = 0; head < graph.states.size(); ++head) {
        SymbolicState current = graph.states[head];  // copy: vector may grow
        for (size_t a = 0; a < g.actions.size(); ++a) {
            auto next = successor(g, current, static_cast<int>(a));
            if (!next) continue;
            int to;
            auto it = graph.index.find(*next);
            if (it != graph.index.end()) {
                to = it->second;
            } else {
                if (graph.states.size() >= limits.max_states) {
                    if (throw_on_cap)
                        throw GroundingError("reachable state cap exceeded (" +
                                             std::to_string(limits.max_states) + " states)");
                    graph.capped = true;
                    continue;
                }
                to = static_cast<int>(graph.states.size());
                graph.states.push_back(*next);
                graph.index.emplace(*next, to);
                per_state_out.emplace_back();
            }
            per_state_out[head].push_back({static_cast<int>(head), static_cast<int>(a), to});
        }
        if (graph.capped) {
            // Keep going so already-discovered states still get their edges;
            // new states stay excluded.
        }
    }

    graph.out_edges.resize(graph.states.size());
    for (size_t sid = 0; sid < per_state_out.size(); ++sid) {
        graph.out_edges[sid].first = static_cast<int>(graph.transitions.size());
        for (const auto& tr : per_state_out[sid]) graph.transitions.push_back(tr);
        graph.out_edges[sid].second = static_cast<int>(graph.transitions.size());
    }
    return graph;
}

}  // namespace

ReachableGraph enumerate_reachable(const GroundDomain& g, const SymbolicState& I,
                                   const EnumerateLimits& limits) {
    return enumerate_impl(g, I, limits, true);
}

ReachableGraph enumerate_reachable_capped(const GroundDomain& g, const SymbolicState& I,
                                          const EnumerateLimits& limits) {
    return enumerate_impl(g, I, limits, false);
}

void dump_transition_system(std::ostream& os, const GroundDomain& g, const ReachableGraph& graph) {
    for (size_t i = 0; i < graph.states.size(); ++i)
        os << "STATE " << i << " " << g.state_string(graph.states[i]) << "\n";
    for (const auto& t : graph.transitions)
        os << "TRANS " << t.from << " " << g.actions[t.action].name << " " << t.to << "\n";
}

}  // namespace peorl
