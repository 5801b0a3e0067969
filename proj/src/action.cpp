#include "delg/action.hpp"

#include <algorithm>
#include <deque>

#include "delg/error.hpp"

namespace delg {

const char* to_string(Tri t)
{
    switch (t) {
    case Tri::No: return "no";
    case Tri::Yes: return "yes";
    case Tri::Unknown: return "unknown";
    }
    return "unknown";
}

std::string to_string(const Owner& o)
{
    switch (o.kind) {
    case OwnerKind::None: return "-";
    case OwnerKind::Controller: return "ctr";
    case OwnerKind::Environment: return "env";
    case OwnerKind::Agent: return o.agent;
    }
    return "-";
}

std::size_t ActionModel::add_action(std::string name, Formula precondition, PostMap postconditions, Owner owner)
{
    names.push_back(std::move(name));
    pre.push_back(std::move(precondition));
    post.push_back(std::move(postconditions));
    owners.push_back(std::move(owner));
    for (auto& [agent, rel] : relations) {
        Relation grown(names.size());
        for (std::size_t i = 0; i + 1 < names.size(); ++i)
            for (std::size_t j : rel.successors(i)) grown.add(i, j);
        rel = std::move(grown);
    }
    return names.size() - 1;
}

std::size_t ActionModel::index_of(const std::string& name) const
{
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw InputError("unknown action '" + name + "'");
    return static_cast<std::size_t>(it - names.begin());
}

Relation ActionModel::relation(const std::string& agent) const
{
    auto it = relations.find(agent);
    if (it == relations.end()) return Relation::identity(size());
    return it->second;
}

std::vector<std::size_t> ActionModel::owned_by(const Owner& o) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
        if (owners[i] == o) out.push_back(i);
    return out;
}

void ActionModel::validate() const
{
    for (std::size_t i = 0; i < size(); ++i) {
        for (const auto& [p, f] : post[i]) {
            if (!is_propositional(f))
                throw InputError("postcondition of '" + names[i] + "' for atom '" + p + "' is not propositional");
        }
    }
}

bool executable(const PointedModel& pm, const ActionModel& a, std::size_t action)
{
    if (action >= a.size()) throw InputError("undeclared action index");
    return eval(pm, a.pre[action]);
}

Valuation post_valuation(const Valuation& v, const ActionModel& a, std::size_t action)
{
    if (action >= a.size()) throw InputError("undeclared action index");
    Valuation out = v;
    for (const auto& [p, f] : a.post[action]) {
        if (!is_propositional(f)) throw InputError("non-propositional postcondition for '" + p + "'");
        if (eval_valuation(v, f)) out.insert(p);
        else out.erase(p);
    }
    return out;
}

Valuation post_valuation(const EpistemicModel& m, std::size_t world, const ActionModel& a, std::size_t action)
{
    return post_valuation(m.valuations.at(world), a, action);
}

Product product_with_origin(const EpistemicModel& m, const ActionModel& a)
{
    Product out;
    std::vector<std::vector<bool>> exec;
    exec.reserve(a.size());
    for (const auto& pre : a.pre) exec.push_back(truth_set(m, pre));
    std::vector<std::vector<std::size_t>> index(m.size(), std::vector<std::size_t>(a.size(), SIZE_MAX));
    for (std::size_t w = 0; w < m.size(); ++w) {
        for (std::size_t x = 0; x < a.size(); ++x) {
            if (!exec[x][w]) continue;
            index[w][x] = out.model.names.size();
            out.model.names.push_back(m.names[w] + "." + a.names[x]);
            out.model.valuations.push_back(post_valuation(m.valuations[w], a, x));
            out.origin.emplace_back(w, x);
        }
    }
    std::set<std::string> agents;
    for (const auto& [agent, rel] : m.relations) agents.insert(agent);
    for (const auto& [agent, rel] : a.relations) agents.insert(agent);
    const std::size_t n = out.model.names.size();
    for (const auto& agent : agents) {
        Relation rm = m.relation(agent);
        Relation ra = a.relation(agent);
        Relation r(n);
        for (std::size_t k = 0; k < n; ++k) {
            auto [w, x] = out.origin[k];
            for (std::size_t w2 : rm.successors(w))
                for (std::size_t x2 : ra.successors(x))
                    if (index[w2][x2] != SIZE_MAX) r.add(k, index[w2][x2]);
        }
        out.model.relations.emplace(agent, std::move(r));
    }
    return out;
}

EpistemicModel product(const EpistemicModel& m, const ActionModel& a) { return product_with_origin(m, a).model; }

PointedModel apply_pointed(const PointedModel& pm, const ActionModel& a, std::size_t action, const ApplyOptions& opts)
{
    if (!executable(pm, a, action))
        throw InputError("action '" + a.names[action] + "' is not executable at world '" + pm.model.names[pm.point] + "'");
    Product prod = product_with_origin(pm.model, a);
    PointedModel out;
    out.model = std::move(prod.model);
    out.point = static_cast<std::size_t>(
        std::find(prod.origin.begin(), prod.origin.end(), std::make_pair(pm.point, action)) - prod.origin.begin());
    if (opts.restrict) out = restrict_to_component(out);
    if (opts.contract) out = bisim_contract(out);
    return out;
}

// ── classification ─────────────────────────────────────────────────────────

PostMap normalized_post(const PostMap& post)
{
    PostMap out;
    for (const auto& [p, f] : post)
        if (!(f.is_atom() && f.name() == p)) out.emplace(p, f);
    return out;
}

bool all_relations_identity(const ActionModel& a)
{
    for (const auto& [agent, rel] : a.relations)
        if (!rel.is_identity()) return false;
    return true;
}

bool all_public_actions(const ActionModel& a) { return all_relations_identity(a); }

bool all_public_announcements(const ActionModel& a)
{
    if (!all_relations_identity(a)) return false;
    for (const auto& post : a.post)
        if (!normalized_post(post).empty()) return false;
    return true;
}

bool all_propositional(const ActionModel& a)
{
    for (const auto& f : a.pre)
        if (!is_propositional(f)) return false;
    for (const auto& post : a.post)
        for (const auto& [p, f] : post)
            if (!is_propositional(f)) return false;
    return true;
}

namespace {

// Replaces maximal modal subformulas by fresh atoms (names cannot clash with identifiers).
Formula abstract_modalities(const Formula& f, std::vector<Formula>& table)
{
    switch (f.kind()) {
    case FormulaKind::Knows:
    case FormulaKind::Poss: {
        for (std::size_t i = 0; i < table.size(); ++i)
            if (table[i] == f) return atom("$" + std::to_string(i));
        table.push_back(f);
        return atom("$" + std::to_string(table.size() - 1));
    }
    case FormulaKind::Not: return neg(abstract_modalities(f.child(), table));
    case FormulaKind::And: return conj(abstract_modalities(f.lhs(), table), abstract_modalities(f.rhs(), table));
    case FormulaKind::Or: return disj(abstract_modalities(f.lhs(), table), abstract_modalities(f.rhs(), table));
    case FormulaKind::Implies:
        return implies(abstract_modalities(f.lhs(), table), abstract_modalities(f.rhs(), table));
    default: return f;
    }
}

// nullopt when the alphabet is too large to enumerate.
std::optional<bool> propositionally_satisfiable(const Formula& f)
{
    auto atoms = atoms_of(f);
    if (atoms.size() > 20) return std::nullopt;
    std::vector<std::string> list(atoms.begin(), atoms.end());
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << list.size()); ++bits) {
        Valuation v;
        for (std::size_t i = 0; i < list.size(); ++i)
            if (bits >> i & 1) v.insert(list[i]);
        if (eval_valuation(v, f)) return true;
    }
    return false;
}

} // namespace

Tri satisfiable(const std::vector<Formula>& fs, const ClassifyOptions& opts)
{
    Formula f = conj_all(fs);
    if (is_propositional(f)) {
        auto r = propositionally_satisfiable(f);
        if (!r) return Tri::Unknown;
        return *r ? Tri::Yes : Tri::No;
    }
    std::vector<Formula> table;
    auto abs = propositionally_satisfiable(abstract_modalities(f, table));
    if (abs && !*abs) return Tri::No;

    std::vector<std::string> atoms;
    for (const auto& p : atoms_of(f)) atoms.push_back(p);
    std::vector<std::string> agents;
    for (const auto& a : agents_of(f)) agents.push_back(a);
    std::size_t tried = 0;
    for (std::size_t n = 1; n <= opts.sat_world_bound; ++n) {
        const std::size_t val_bits = atoms.size() * n;
        const std::size_t rel_bits = agents.size() * n * n;
        if (val_bits + rel_bits >= 40) return Tri::Unknown;
        const std::uint64_t total = std::uint64_t{1} << (val_bits + rel_bits);
        for (std::uint64_t code = 0; code < total; ++code) {
            if (++tried > opts.sat_model_budget) return Tri::Unknown;
            EpistemicModel m;
            for (std::size_t w = 0; w < n; ++w) {
                Valuation v;
                for (std::size_t i = 0; i < atoms.size(); ++i)
                    if (code >> (w * atoms.size() + i) & 1) v.insert(atoms[i]);
                m.add_world("w" + std::to_string(w), std::move(v));
            }
            std::size_t bit = val_bits;
            for (const auto& agent : agents) {
                Relation r(n);
                for (std::size_t i = 0; i < n; ++i)
                    for (std::size_t j = 0; j < n; ++j, ++bit)
                        if (code >> bit & 1) r.add(i, j);
                m.relations.emplace(agent, std::move(r));
            }
            auto truth = truth_set(m, f);
            if (std::find(truth.begin(), truth.end(), true) != truth.end()) return Tri::Yes;
        }
    }
    return Tri::Unknown;
}

ActionClass classify(const ActionModel& a, std::optional<std::size_t> point, const ClassifyOptions& opts)
{
    ActionClass c;
    c.propositional = all_propositional(a);
    c.s5 = true;
    for (const auto& [agent, rel] : a.relations)
        if (!rel.is_equivalence()) c.s5 = false;
    if (point) {
        if (*point >= a.size()) throw InputError("undeclared action index");
        if (all_relations_identity(a)) {
            c.public_action = point;
            if (normalized_post(a.post[*point]).empty()) c.public_announcement = point;
        }
    }

    // Connected components of the action graph under all relations.
    const std::size_t n = a.size();
    std::vector<std::size_t> comp(n, SIZE_MAX);
    std::vector<std::vector<std::size_t>> adj(n);
    for (const auto& [agent, rel] : a.relations)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j : rel.successors(i)) {
                adj[i].push_back(j);
                adj[j].push_back(i);
            }
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] != SIZE_MAX) continue;
        std::deque<std::size_t> queue{s};
        comp[s] = s;
        while (!queue.empty()) {
            std::size_t x = queue.front();
            queue.pop_front();
            for (std::size_t y : adj[x])
                if (comp[y] == SIZE_MAX) {
                    comp[y] = s;
                    queue.push_back(y);
                }
        }
    }
    c.separable = Tri::Yes;
    for (std::size_t i = 0; i < n && c.separable != Tri::No; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (comp[i] != comp[j]) continue;
            Tri sat = satisfiable({a.pre[i], a.pre[j]}, opts);
            if (sat == Tri::Yes) {
                c.separable = Tri::No;
                break;
            }
            if (sat == Tri::Unknown) c.separable = Tri::Unknown;
        }
    }
    return c;
}

std::pair<ActionModel, std::vector<std::size_t>> merge_pointed_actions(const std::vector<PointedActionModel>& parts)
{
    ActionModel out;
    std::vector<std::size_t> points;
    if (parts.empty()) return {out, points};
    std::set<std::string> agents;
    for (const auto& [agent, rel] : parts.front().model.relations) agents.insert(agent);
    for (const auto& part : parts) {
        std::set<std::string> mine;
        for (const auto& [agent, rel] : part.model.relations) mine.insert(agent);
        if (mine != agents) throw InputError("merged action models must share the agent set");
    }
    std::vector<std::size_t> offset;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        offset.push_back(out.size());
        const ActionModel& m = parts[i].model;
        for (std::size_t x = 0; x < m.size(); ++x) {
            out.names.push_back("a" + std::to_string(i) + "_" + m.names[x]);
            out.pre.push_back(m.pre[x]);
            out.post.push_back(m.post[x]);
            out.owners.push_back(m.owners[x]);
        }
        points.push_back(offset.back() + parts[i].point);
    }
    for (const auto& agent : agents) {
        Relation r(out.size());
        for (std::size_t i = 0; i < parts.size(); ++i) {
            const Relation& src = parts[i].model.relations.at(agent);
            for (std::size_t x = 0; x < src.size(); ++x)
                for (std::size_t y : src.successors(x)) r.add(offset[i] + x, offset[i] + y);
        }
        out.relations.emplace(agent, std::move(r));
    }
    return {out, points};
}

// ── finite-domain variables ────────────────────────────────────────────────

FiniteDomainVar::FiniteDomainVar(std::string name, std::vector<std::string> domain, bool binary)
    : name_(std::move(name)), domain_(std::move(domain)), binary_(binary)
{
    if (domain_.empty()) throw InputError("finite-domain variable '" + name_ + "' has an empty domain");
}

std::size_t FiniteDomainVar::index_of(const std::string& value) const
{
    auto it = std::find(domain_.begin(), domain_.end(), value);
    if (it == domain_.end()) throw InputError("value '" + value + "' not in the domain of '" + name_ + "'");
    return static_cast<std::size_t>(it - domain_.begin());
}

std::size_t FiniteDomainVar::bits() const
{
    std::size_t b = 1;
    while ((std::size_t{1} << b) < domain_.size()) ++b;
    return b;
}

std::vector<std::string> FiniteDomainVar::atoms() const
{
    std::vector<std::string> out;
    if (binary_) {
        for (std::size_t i = 0; i < bits(); ++i) out.push_back(name_ + "_b" + std::to_string(i));
    } else {
        for (const auto& v : domain_) out.push_back(name_ + "@" + v);
    }
    return out;
}

Valuation FiniteDomainVar::encode(const std::string& value) const
{
    const std::size_t k = index_of(value);
    Valuation out;
    if (binary_) {
        for (std::size_t i = 0; i < bits(); ++i)
            if (k >> i & 1) out.insert(name_ + "_b" + std::to_string(i));
    } else {
        out.insert(name_ + "@" + value);
    }
    return out;
}

Formula FiniteDomainVar::test(const std::string& value) const
{
    const std::size_t k = index_of(value);
    if (!binary_) return atom(name_ + "@" + value);
    std::vector<Formula> lits;
    for (std::size_t i = 0; i < bits(); ++i) {
        Formula b = atom(name_ + "_b" + std::to_string(i));
        lits.push_back(k >> i & 1 ? b : neg(b));
    }
    return conj_all(lits);
}

PostMap FiniteDomainVar::assign(const std::string& value) const
{
    Valuation on = encode(value);
    PostMap out;
    for (const auto& p : atoms()) out.emplace(p, on.count(p) ? top() : bottom());
    return out;
}

PostMap FiniteDomainVar::assign_cases(const std::vector<std::pair<Formula, std::string>>& cases) const
{
    PostMap out;
    for (const auto& p : atoms()) {
        std::vector<Formula> guards;
        for (const auto& [guard, value] : cases)
            if (encode(value).count(p)) guards.push_back(guard);
        out.emplace(p, disj_all(guards));
    }
    return out;
}

std::optional<std::string> FiniteDomainVar::decode(const Valuation& v) const
{
    if (binary_) {
        std::size_t k = 0;
        for (std::size_t i = 0; i < bits(); ++i)
            if (v.count(name_ + "_b" + std::to_string(i))) k |= std::size_t{1} << i;
        if (k >= domain_.size()) return std::nullopt;
        return domain_[k];
    }
    std::optional<std::string> found;
    for (const auto& value : domain_) {
        if (v.count(name_ + "@" + value)) {
            if (found) return std::nullopt;
            found = value;
        }
    }
    return found;
}

} // namespace delg
