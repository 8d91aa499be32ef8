#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace quasi {

constexpr std::size_t kDefaultIterationCap = std::size_t{1} << 20;

struct IterationCapExceeded : std::runtime_error {
    explicit IterationCapExceeded(std::size_t cap)
        : std::runtime_error("iteration cap " + std::to_string(cap) + " exceeded") {}
};

// Set of pairwise incomparable elements under a quasiorder supplied per call.
// Inserting an element dominated by (or equivalent to) a member is a no-op;
// inserting one that is strictly below members evicts them.
template <class T>
class Antichain {
public:
    using value_type = T;

    template <class Leq>
    bool insert(T x, Leq&& leq) {
        for (auto& e : elems_)
            if (leq(e, x)) return false;
        std::erase_if(elems_, [&](const T& e) { return leq(x, e); });
        elems_.push_back(std::move(x));
        return true;
    }

    const std::vector<T>& elements() const { return elems_; }
    std::size_t size() const { return elems_.size(); }
    bool empty() const { return elems_.empty(); }
    auto begin() const { return elems_.begin(); }
    auto end() const { return elems_.end(); }

private:
    std::vector<T> elems_;
};

template <class T, class Leq>
Antichain<T> minor(const std::vector<T>& items, Leq&& leq) {
    Antichain<T> r;
    for (auto& x : items) r.insert(x, leq);
    return r;
}

// X ⊑ Y iff every x in X is above some y in Y.
template <class X, class Y, class Leq>
bool ac_below(const X& xs, const Y& ys, Leq&& leq) {
    for (auto& x : xs) {
        bool found = false;
        for (auto& y : ys)
            if (leq(y, x)) {
                found = true;
                break;
            }
        if (!found) return false;
    }
    return true;
}

template <class V>
struct KleeneResult {
    V value;
    std::size_t iterations = 0;
};

// Iterates step from bottom until abs_eq(step(x), x); returns that x.
template <class V, class Step, class Eq>
KleeneResult<V> kleene(Step&& step, V bottom, Eq&& abs_eq, std::size_t cap = kDefaultIterationCap) {
    V x = std::move(bottom);
    for (std::size_t i = 1;; ++i) {
        if (i > cap) throw IterationCapExceeded(cap);
        V y = step(x);
        if (abs_eq(y, x)) return {std::move(x), i};
        x = std::move(y);
    }
}

}  // namespace quasi
