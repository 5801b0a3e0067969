#include <algorithm>
#include <map>
#include <optional>

#include "delg/model.hpp"

namespace delg {

namespace {

// Colour refinement followed by individualization over residual ties. Every step is a
// function of colours only, so the resulting serialization is renaming-invariant; the
// minimum over individualization choices makes it a complete isomorphism invariant.
class Canonizer {
public:
    Canonizer(const EpistemicModel& m, const std::vector<int>& marks) : m_(m), marks_(marks)
    {
        for (const auto& [agent, rel] : m.relations) {
            rels_.push_back(&rel);
            agent_names_.push_back(agent);
        }
        const std::size_t n = m.size();
        preds_.resize(rels_.size(), std::vector<std::vector<std::size_t>>(n));
        for (std::size_t a = 0; a < rels_.size(); ++a)
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j : rels_[a]->successors(i)) preds_[a][j].push_back(i);

        // Initial colours: rank of (mark, valuation).
        std::vector<std::pair<int, const Valuation*>> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = {marks.at(i), &m.valuations[i]};
        auto less = [](const auto& x, const auto& y) {
            if (x.first != y.first) return x.first < y.first;
            return *x.second < *y.second;
        };
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return less(labels[x], labels[y]); });
        initial_.assign(n, 0);
        std::size_t c = 0;
        for (std::size_t k = 0; k < n; ++k) {
            if (k > 0 && less(labels[order[k - 1]], labels[order[k]])) ++c;
            initial_[order[k]] = c;
        }
    }

    std::string run()
    {
        auto colors = refine(initial_);
        std::vector<std::size_t> prefix;
        search(colors, prefix);
        return best_->text;
    }

private:
    using Colors = std::vector<std::size_t>;

    Colors refine(Colors colors) const
    {
        const std::size_t n = colors.size();
        std::size_t count = distinct(colors);
        while (true) {
            std::vector<std::vector<std::size_t>> sigs(n);
            for (std::size_t i = 0; i < n; ++i) {
                auto& sig = sigs[i];
                sig.push_back(colors[i]);
                for (const Relation* rel : rels_) {
                    std::vector<std::size_t> succ;
                    for (std::size_t j : rel->successors(i)) succ.push_back(colors[j]);
                    std::sort(succ.begin(), succ.end());
                    sig.push_back(SIZE_MAX);
                    sig.insert(sig.end(), succ.begin(), succ.end());
                }
            }
            colors = rank(sigs);
            std::size_t next = distinct(colors);
            if (next == count) return colors;
            count = next;
        }
    }

    static Colors rank(const std::vector<std::vector<std::size_t>>& sigs)
    {
        std::vector<std::size_t> order(sigs.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return sigs[x] < sigs[y]; });
        Colors out(sigs.size());
        std::size_t c = 0;
        for (std::size_t k = 0; k < order.size(); ++k) {
            if (k > 0 && sigs[order[k - 1]] != sigs[order[k]]) ++c;
            out[order[k]] = c;
        }
        return out;
    }

    static std::size_t distinct(const Colors& colors)
    {
        Colors copy = colors;
        std::sort(copy.begin(), copy.end());
        return static_cast<std::size_t>(std::unique(copy.begin(), copy.end()) - copy.begin());
    }

    // Swapping two same-coloured twins is an automorphism, so one representative suffices.
    bool twins(std::size_t u, std::size_t v) const
    {
        for (std::size_t a = 0; a < rels_.size(); ++a) {
            const Relation& r = *rels_[a];
            if (r.has(u, u) != r.has(v, v) || r.has(u, v) != r.has(v, u)) return false;
            auto strip = [&](const std::vector<std::size_t>& s) {
                std::vector<std::size_t> out;
                for (std::size_t x : s)
                    if (x != u && x != v) out.push_back(x);
                return out;
            };
            if (strip(r.successors(u)) != strip(r.successors(v))) return false;
            if (strip(preds_[a][u]) != strip(preds_[a][v])) return false;
        }
        return true;
    }

    struct Leaf {
        std::string text;
        std::vector<std::size_t> world_at;
    };

    // Two leaves with the same serialization differ by an automorphism.
    void record_automorphism(const Leaf& a, const std::vector<std::size_t>& world_at)
    {
        if (generators_.size() >= max_generators) return;
        std::vector<std::size_t> perm(world_at.size());
        for (std::size_t k = 0; k < world_at.size(); ++k) perm[a.world_at[k]] = world_at[k];
        if (perm != a.world_at && std::find(generators_.begin(), generators_.end(), perm) == generators_.end())
            generators_.push_back(std::move(perm));
    }

    // Orbit representatives under the known automorphisms that fix `prefix` pointwise.
    std::vector<std::size_t> orbits(const std::vector<std::size_t>& prefix, std::size_t n) const
    {
        std::vector<std::size_t> parent(n);
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
        auto find = [&](std::size_t x) {
            while (parent[x] != x) x = parent[x] = parent[parent[x]];
            return x;
        };
        for (const auto& g : generators_) {
            bool fixes = true;
            for (std::size_t v : prefix) fixes = fixes && g[v] == v;
            if (!fixes) continue;
            for (std::size_t i = 0; i < n; ++i) parent[find(i)] = find(g[i]);
        }
        for (std::size_t i = 0; i < n; ++i) parent[i] = find(i);
        return parent;
    }

    void search(const Colors& colors, std::vector<std::size_t>& prefix)
    {
        const std::size_t n = colors.size();
        std::vector<std::size_t> sizes(n, 0);
        for (std::size_t c : colors) ++sizes[c];
        std::optional<std::size_t> target;
        for (std::size_t c = 0; c < n; ++c) {
            if (sizes[c] > 1) {
                target = c;
                break;
            }
        }
        if (!target) {
            Leaf leaf{serialize(colors), std::vector<std::size_t>(n)};
            for (std::size_t i = 0; i < n; ++i) leaf.world_at[colors[i]] = i;
            if (!first_) {
                first_ = leaf;
            } else if (leaf.text == first_->text) {
                record_automorphism(*first_, leaf.world_at);
            }
            if (!best_ || leaf.text < best_->text) {
                best_ = std::move(leaf);
            } else if (leaf.text == best_->text) {
                record_automorphism(*best_, leaf.world_at);
            }
            return;
        }
        std::vector<std::size_t> tried;
        for (std::size_t v = 0; v < n; ++v) {
            if (colors[v] != *target) continue;
            bool redundant = false;
            const auto orbit = orbits(prefix, n);
            for (std::size_t t : tried) {
                if (orbit[t] == orbit[v] || twins(t, v)) {
                    redundant = true;
                    break;
                }
            }
            if (redundant) continue;
            tried.push_back(v);
            std::vector<std::vector<std::size_t>> sigs(n);
            for (std::size_t i = 0; i < n; ++i) sigs[i] = {colors[i], i == v ? 0u : 1u};
            prefix.push_back(v);
            search(refine(rank(sigs)), prefix);
            prefix.pop_back();
        }
    }

    // Colours are discrete here, so they give the world order directly.
    std::string serialize(const Colors& colors) const
    {
        const std::size_t n = colors.size();
        std::vector<std::size_t> world_at(n);
        for (std::size_t i = 0; i < n; ++i) world_at[colors[i]] = i;
        std::string out = std::to_string(n);
        out += '|';
        for (std::size_t k = 0; k < n; ++k) {
            if (k) out += ',';
            out += std::to_string(marks_[world_at[k]]);
        }
        out += '|';
        for (std::size_t k = 0; k < n; ++k) {
            if (k) out += '/';
            bool first = true;
            for (const auto& p : m_.valuations[world_at[k]]) {
                if (!first) out += '+';
                out += p;
                first = false;
            }
        }
        for (std::size_t a = 0; a < rels_.size(); ++a) {
            out += '|';
            out += agent_names_[a];
            out += '=';
            for (std::size_t k = 0; k < n; ++k) {
                std::vector<std::size_t> succ;
                for (std::size_t j : rels_[a]->successors(world_at[k])) succ.push_back(colors[j]);
                std::sort(succ.begin(), succ.end());
                if (k) out += ';';
                for (std::size_t t = 0; t < succ.size(); ++t) {
                    if (t) out += ',';
                    out += std::to_string(succ[t]);
                }
            }
        }
        return out;
    }

    const EpistemicModel& m_;
    std::vector<int> marks_;
    std::vector<const Relation*> rels_;
    std::vector<std::string> agent_names_;
    std::vector<std::vector<std::vector<std::size_t>>> preds_;
    Colors initial_;
    static constexpr std::size_t max_generators = 64;
    std::vector<std::vector<std::size_t>> generators_;
    std::optional<Leaf> first_;
    std::optional<Leaf> best_;
};

} // namespace

std::string canonical_key_marked(const EpistemicModel& m, const std::vector<int>& marks)
{
    Canonizer c(m, marks);
    return c.run();
}

std::string canonical_key(const PointedModel& pm, bool contract)
{
    PointedModel norm = restrict_to_component(pm);
    if (contract) norm = bisim_contract(norm);
    std::vector<int> marks(norm.model.size(), 0);
    marks[norm.point] = 1;
    return canonical_key_marked(norm.model, marks);
}

} // namespace delg
