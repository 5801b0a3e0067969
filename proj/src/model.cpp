#include "delg/model.hpp"

#include <algorithm>
#include <deque>

#include "delg/error.hpp"

namespace delg {

Relation Relation::identity(std::size_t n)
{
    Relation r(n);
    for (std::size_t i = 0; i < n; ++i) r.succ_[i].push_back(i);
    return r;
}

Relation Relation::universal(std::size_t n)
{
    Relation r(n);
    for (std::size_t i = 0; i < n; ++i) {
        r.succ_[i].resize(n);
        for (std::size_t j = 0; j < n; ++j) r.succ_[i][j] = j;
    }
    return r;
}

Relation Relation::from_partition(std::size_t n, const std::vector<std::vector<std::size_t>>& classes)
{
    Relation r(n);
    std::vector<bool> covered(n, false);
    for (const auto& cls : classes) {
        for (std::size_t x : cls) {
            if (x >= n) throw InputError("partition member out of range");
            if (covered[x]) throw InputError("partition classes overlap");
            covered[x] = true;
        }
        for (std::size_t x : cls)
            for (std::size_t y : cls) r.add(x, y);
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!covered[i]) r.add(i, i);
    return r;
}

void Relation::add(std::size_t from, std::size_t to)
{
    if (from >= succ_.size() || to >= succ_.size()) throw InputError("relation endpoint out of range");
    auto& s = succ_[from];
    auto it = std::lower_bound(s.begin(), s.end(), to);
    if (it == s.end() || *it != to) s.insert(it, to);
}

bool Relation::has(std::size_t from, std::size_t to) const
{
    const auto& s = succ_.at(from);
    return std::binary_search(s.begin(), s.end(), to);
}

std::size_t Relation::pair_count() const
{
    std::size_t n = 0;
    for (const auto& s : succ_) n += s.size();
    return n;
}

bool Relation::is_identity() const
{
    for (std::size_t i = 0; i < succ_.size(); ++i)
        if (succ_[i].size() != 1 || succ_[i][0] != i) return false;
    return true;
}

bool Relation::is_reflexive() const
{
    for (std::size_t i = 0; i < succ_.size(); ++i)
        if (!has(i, i)) return false;
    return true;
}

bool Relation::is_symmetric() const
{
    for (std::size_t i = 0; i < succ_.size(); ++i)
        for (std::size_t j : succ_[i])
            if (!has(j, i)) return false;
    return true;
}

bool Relation::is_transitive() const
{
    for (std::size_t i = 0; i < succ_.size(); ++i)
        for (std::size_t j : succ_[i])
            for (std::size_t k : succ_[j])
                if (!has(i, k)) return false;
    return true;
}

Relation Relation::induced(const std::vector<std::size_t>& keep) const
{
    std::vector<std::size_t> pos(succ_.size(), SIZE_MAX);
    for (std::size_t i = 0; i < keep.size(); ++i) pos[keep[i]] = i;
    Relation r(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j : succ_[keep[i]])
            if (pos[j] != SIZE_MAX) r.succ_[i].push_back(pos[j]);
    for (auto& s : r.succ_) std::sort(s.begin(), s.end());
    return r;
}

// ── EpistemicModel ─────────────────────────────────────────────────────────

std::size_t EpistemicModel::add_world(std::string name, Valuation v)
{
    names.push_back(std::move(name));
    valuations.push_back(std::move(v));
    for (auto& [agent, rel] : relations) {
        Relation grown(names.size());
        for (std::size_t i = 0; i + 1 < names.size(); ++i)
            for (std::size_t j : rel.successors(i)) grown.add(i, j);
        rel = std::move(grown);
    }
    return names.size() - 1;
}

std::size_t EpistemicModel::index_of(const std::string& name) const
{
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw InputError("unknown world '" + name + "'");
    return static_cast<std::size_t>(it - names.begin());
}

Relation EpistemicModel::relation(const std::string& agent) const
{
    auto it = relations.find(agent);
    if (it == relations.end()) return Relation::identity(size());
    return it->second;
}

std::vector<std::string> EpistemicModel::agents() const
{
    std::vector<std::string> out;
    for (const auto& [agent, rel] : relations) out.push_back(agent);
    return out;
}

// ── evaluation ─────────────────────────────────────────────────────────────

std::vector<bool> truth_set(const EpistemicModel& m, const Formula& f)
{
    const std::size_t n = m.size();
    switch (f.kind()) {
    case FormulaKind::True: return std::vector<bool>(n, true);
    case FormulaKind::False: return std::vector<bool>(n, false);
    case FormulaKind::Atom: {
        std::vector<bool> out(n);
        for (std::size_t i = 0; i < n; ++i) out[i] = m.valuations[i].count(f.name()) != 0;
        return out;
    }
    case FormulaKind::Not: {
        auto out = truth_set(m, f.child());
        out.flip();
        return out;
    }
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies: {
        auto a = truth_set(m, f.lhs());
        auto b = truth_set(m, f.rhs());
        for (std::size_t i = 0; i < n; ++i) {
            if (f.kind() == FormulaKind::And) a[i] = a[i] && b[i];
            else if (f.kind() == FormulaKind::Or) a[i] = a[i] || b[i];
            else a[i] = !a[i] || b[i];
        }
        return a;
    }
    case FormulaKind::Knows:
    case FormulaKind::Poss: {
        const auto sub = truth_set(m, f.child());
        const bool universal = f.kind() == FormulaKind::Knows;
        std::vector<bool> out(n);
        auto it = m.relations.find(f.name());
        for (std::size_t i = 0; i < n; ++i) {
            if (it == m.relations.end()) {
                out[i] = sub[i];
                continue;
            }
            bool acc = universal;
            for (std::size_t j : it->second.successors(i)) {
                if (sub[j] != universal) {
                    acc = !universal;
                    break;
                }
            }
            out[i] = acc;
        }
        return out;
    }
    }
    return std::vector<bool>(n, false);
}

bool eval(const EpistemicModel& m, std::size_t world, const Formula& f)
{
    if (world >= m.size()) throw InputError("world index out of range");
    return truth_set(m, f)[world];
}

bool eval(const PointedModel& pm, const Formula& f) { return eval(pm.model, pm.point, f); }

bool is_s5(const EpistemicModel& m)
{
    for (const auto& [agent, rel] : m.relations)
        if (!rel.is_equivalence()) return false;
    return true;
}

// ── normalization ──────────────────────────────────────────────────────────

std::vector<std::size_t> component_of(const EpistemicModel& m, const std::vector<std::size_t>& seeds)
{
    const std::size_t n = m.size();
    std::vector<std::vector<std::size_t>> undirected(n);
    for (const auto& [agent, rel] : m.relations) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j : rel.successors(i)) {
                undirected[i].push_back(j);
                undirected[j].push_back(i);
            }
        }
    }
    std::vector<bool> seen(n, false);
    std::deque<std::size_t> queue;
    for (std::size_t s : seeds) {
        if (s >= n) throw InputError("world index out of range");
        if (!seen[s]) {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while (!queue.empty()) {
        std::size_t x = queue.front();
        queue.pop_front();
        for (std::size_t y : undirected[x]) {
            if (!seen[y]) {
                seen[y] = true;
                queue.push_back(y);
            }
        }
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < n; ++i)
        if (seen[i]) out.push_back(i);
    return out;
}

EpistemicModel induced_submodel(const EpistemicModel& m, const std::vector<std::size_t>& keep)
{
    EpistemicModel out;
    for (std::size_t i : keep) {
        out.names.push_back(m.names.at(i));
        out.valuations.push_back(m.valuations.at(i));
    }
    for (const auto& [agent, rel] : m.relations) out.relations.emplace(agent, rel.induced(keep));
    return out;
}

PointedModel restrict_to_component(const PointedModel& pm)
{
    auto keep = component_of(pm.model, {pm.point});
    PointedModel out;
    out.model = induced_submodel(pm.model, keep);
    out.point = static_cast<std::size_t>(std::lower_bound(keep.begin(), keep.end(), pm.point) - keep.begin());
    return out;
}

namespace {

// Renumbers labels by order of first occurrence; returns the number of distinct labels.
template <class Label>
std::size_t renumber(const std::vector<Label>& labels, std::vector<std::size_t>& out)
{
    std::map<Label, std::size_t> ids;
    out.assign(labels.size(), 0);
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = ids.emplace(labels[i], ids.size());
        out[i] = it->second;
    }
    return ids.size();
}

} // namespace

std::vector<std::size_t> bisimulation_classes(const EpistemicModel& m, const std::vector<std::size_t>& initial)
{
    const std::size_t n = m.size();
    std::vector<std::size_t> blocks;
    std::size_t count = renumber(initial, blocks);
    while (true) {
        std::vector<std::vector<std::size_t>> sigs(n);
        for (std::size_t i = 0; i < n; ++i) {
            auto& sig = sigs[i];
            sig.push_back(blocks[i]);
            for (const auto& [agent, rel] : m.relations) {
                std::vector<std::size_t> succ;
                for (std::size_t j : rel.successors(i)) succ.push_back(blocks[j]);
                std::sort(succ.begin(), succ.end());
                succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
                sig.push_back(SIZE_MAX); // agent separator
                sig.insert(sig.end(), succ.begin(), succ.end());
            }
        }
        std::vector<std::size_t> next;
        std::size_t next_count = renumber(sigs, next);
        blocks = std::move(next);
        if (next_count == count) return blocks;
        count = next_count;
    }
}

std::vector<std::size_t> bisimulation_classes(const EpistemicModel& m)
{
    std::vector<std::size_t> initial;
    renumber(m.valuations, initial);
    return bisimulation_classes(m, initial);
}

EpistemicModel quotient(const EpistemicModel& m, const std::vector<std::size_t>& blocks)
{
    std::size_t count = 0;
    for (std::size_t b : blocks) count = std::max(count, b + 1);
    std::vector<std::size_t> rep(count, SIZE_MAX);
    for (std::size_t i = 0; i < blocks.size(); ++i)
        if (rep[blocks[i]] == SIZE_MAX) rep[blocks[i]] = i;
    EpistemicModel out;
    for (std::size_t b = 0; b < count; ++b) {
        out.names.push_back(m.names[rep[b]]);
        out.valuations.push_back(m.valuations[rep[b]]);
    }
    for (const auto& [agent, rel] : m.relations) {
        Relation q(count);
        for (std::size_t i = 0; i < blocks.size(); ++i)
            for (std::size_t j : rel.successors(i)) q.add(blocks[i], blocks[j]);
        out.relations.emplace(agent, std::move(q));
    }
    return out;
}

PointedModel bisim_contract(const PointedModel& pm)
{
    auto blocks = bisimulation_classes(pm.model);
    PointedModel out;
    out.model = quotient(pm.model, blocks);
    out.point = blocks.at(pm.point);
    return out;
}

} // namespace delg
