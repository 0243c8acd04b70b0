#include "gamehedge/double_description.hpp"

#include <bit>
#include <cstdint>
#include <stdexcept>

namespace gamehedge {

namespace {

class Bitset {
public:
    explicit Bitset(std::size_t bits = 0) : words_((bits + 63) / 64, 0) {}

    void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
    void set_first(std::size_t count) {
        for (std::size_t i = 0; i < count; ++i) set(i);
    }

    Bitset operator&(const Bitset& o) const {
        Bitset r;
        r.words_.resize(words_.size());
        for (std::size_t w = 0; w < words_.size(); ++w) r.words_[w] = words_[w] & o.words_[w];
        return r;
    }

    bool subset_of(const Bitset& o) const {
        for (std::size_t w = 0; w < words_.size(); ++w)
            if (words_[w] & ~o.words_[w]) return false;
        return true;
    }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

private:
    std::vector<std::uint64_t> words_;
};

struct Ray {
    VectorZ v;
    Bitset tight;  // indices of processed inequalities with row . v == 0
};

// Returns |s| * v - sign(s) * t * l, which is orthogonal to the row that produced s = row.l, t = row.v.
VectorZ eliminate(const VectorZ& v, const Integer& t, const VectorZ& l, const Integer& s) {
    return combine(s < 0 ? Integer(-s) : s, v, s < 0 ? t : Integer(-t), l);
}

class Enumerator {
public:
    Enumerator(Eigen::Index dim, std::size_t n_ineq) : dim_(dim), n_ineq_(n_ineq) {
        for (Eigen::Index k = 0; k < dim; ++k) {
            VectorZ e = VectorZ::Constant(dim, Integer(0));
            e(k) = 1;
            lines_.push_back(e);
        }
    }

    void add_equality(const VectorZ& row) { add(row, -1); }
    void add_inequality(const VectorZ& row, std::size_t index) {
        add(row, static_cast<long>(index));
        ++processed_;
    }

    ConeGenerators result() && {
        ConeGenerators g;
        g.lines = std::move(lines_);
        for (auto& r : rays_) g.rays.push_back(std::move(r.v));
        return g;
    }

private:
    // index < 0 marks an equality.
    void add(const VectorZ& row, long index) {
        const bool equality = index < 0;
        for (std::size_t li = 0; li < lines_.size(); ++li) {
            Integer s = dot(row, lines_[li]);
            if (s == 0) continue;
            VectorZ l = lines_[li];
            lines_.erase(lines_.begin() + static_cast<std::ptrdiff_t>(li));
            for (auto& other : lines_) {
                Integer t = dot(row, other);
                if (t != 0) other = eliminate(other, t, l, s);
            }
            for (auto& r : rays_) {
                Integer t = dot(row, r.v);
                if (t != 0) r.v = eliminate(r.v, t, l, s);
                if (!equality) r.tight.set(static_cast<std::size_t>(index));
            }
            if (!equality) {
                Ray fresh{s < 0 ? VectorZ(-l) : l, Bitset(n_ineq_)};
                fresh.tight.set_first(processed_);
                rays_.push_back(std::move(fresh));
            }
            return;
        }

        std::vector<Integer> value(rays_.size());
        std::vector<std::size_t> pos, neg;
        for (std::size_t i = 0; i < rays_.size(); ++i) {
            value[i] = dot(row, rays_[i].v);
            if (value[i] > 0) pos.push_back(i);
            if (value[i] < 0) neg.push_back(i);
        }
        if (neg.empty() && (!equality || pos.empty())) {
            if (!equality)
                for (std::size_t i = 0; i < rays_.size(); ++i)
                    if (value[i] == 0) rays_[i].tight.set(static_cast<std::size_t>(index));
            return;
        }

        std::vector<Ray> next;
        for (std::size_t i = 0; i < rays_.size(); ++i) {
            if (value[i] == 0) {
                next.push_back(rays_[i]);
                if (!equality) next.back().tight.set(static_cast<std::size_t>(index));
            } else if (value[i] > 0 && !equality) {
                next.push_back(rays_[i]);
            }
        }
        for (std::size_t p : pos) {
            for (std::size_t q : neg) {
                Bitset common = rays_[p].tight & rays_[q].tight;
                bool adjacent = true;
                for (std::size_t o = 0; o < rays_.size() && adjacent; ++o) {
                    if (o == p || o == q) continue;
                    if (common.subset_of(rays_[o].tight)) adjacent = false;
                }
                if (!adjacent) continue;
                Ray r{combine(value[p], rays_[q].v, -value[q], rays_[p].v), std::move(common)};
                if (!equality) r.tight.set(static_cast<std::size_t>(index));
                next.push_back(std::move(r));
            }
        }
        rays_ = std::move(next);
    }

    Eigen::Index dim_;
    std::size_t n_ineq_;
    std::size_t processed_ = 0;
    std::vector<VectorZ> lines_;
    std::vector<Ray> rays_;
};

}  // namespace

ConeGenerators enumerate_cone(const std::vector<VectorZ>& inequalities,
                              const std::vector<VectorZ>& equalities, Eigen::Index dim) {
    for (const auto& r : inequalities)
        if (r.size() != dim) throw std::invalid_argument("enumerate_cone: dimension mismatch");
    for (const auto& r : equalities)
        if (r.size() != dim) throw std::invalid_argument("enumerate_cone: dimension mismatch");
    Enumerator dd(dim, inequalities.size());
    for (const auto& e : equalities) dd.add_equality(e);
    for (std::size_t i = 0; i < inequalities.size(); ++i) dd.add_inequality(inequalities[i], i);
    return std::move(dd).result();
}

}  // namespace gamehedge
