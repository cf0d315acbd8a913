#include "hlog/form.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace hlog {

namespace {

std::vector<IndexTuple> build_tuples(int n, int degree) {
    std::vector<IndexTuple> out;
    if (degree == 0) {
        out.push_back({});
        return out;
    }
    IndexTuple cur(degree);
    // iterative ascending-combination enumeration
    for (int i = 0; i < degree; ++i) cur[i] = i;
    while (true) {
        out.push_back(cur);
        int pos = degree - 1;
        while (pos >= 0 && cur[pos] == n - degree + pos) --pos;
        if (pos < 0) break;
        ++cur[pos];
        for (int i = pos + 1; i < degree; ++i) cur[i] = cur[i - 1] + 1;
    }
    return out;
}

} // namespace

const std::vector<IndexTuple>& form_tuples(int n, int degree) {
    static std::mutex mtx;
    static std::map<std::pair<int, int>, std::vector<IndexTuple>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto key = std::make_pair(n, degree);
    auto it = cache.find(key);
    if (it == cache.end()) it = cache.emplace(key, build_tuples(n, degree)).first;
    return it->second;
}

int form_component_count(int n, int degree) {
    return static_cast<int>(form_tuples(n, degree).size());
}

int form_tuple_index(int n, const IndexTuple& I) {
    const auto& all = form_tuples(n, static_cast<int>(I.size()));
    auto it = std::find(all.begin(), all.end(), I);
    return it == all.end() ? -1 : static_cast<int>(it - all.begin());
}

int merge_tuples(const IndexTuple& I, const IndexTuple& J, IndexTuple& out) {
    out.clear();
    out.reserve(I.size() + J.size());
    // merge-sort the concatenation, counting inversions between I and J
    std::size_t i = 0, j = 0;
    long inversions = 0;
    while (i < I.size() || j < J.size()) {
        if (j == J.size() || (i < I.size() && I[i] < J[j])) {
            out.push_back(I[i++]);
        } else if (i == I.size() || J[j] < I[i]) {
            // J[j] jumps over the remaining elements of I
            inversions += static_cast<long>(I.size() - i);
            out.push_back(J[j++]);
        } else {
            return 0; // repeated index
        }
    }
    return (inversions % 2 == 0) ? 1 : -1;
}

int insertion_sign(int j, const IndexTuple& I) {
    int below = 0;
    for (int v : I) {
        if (v == j) return 0;
        if (v < j) ++below;
    }
    return (below % 2 == 0) ? 1 : -1;
}

DiscreteForm& DiscreteForm::operator+=(const DiscreteForm& o) {
    if (grid_ != o.grid_ || degree_ != o.degree_)
        throw std::invalid_argument("form: grid/degree mismatch in +=");
    for (int c = 0; c < component_count(); ++c) {
        auto& a = comps_[c];
        const auto& b = o.comps_[c];
        for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
    }
    return *this;
}

DiscreteForm& DiscreteForm::operator-=(const DiscreteForm& o) {
    if (grid_ != o.grid_ || degree_ != o.degree_)
        throw std::invalid_argument("form: grid/degree mismatch in -=");
    for (int c = 0; c < component_count(); ++c) {
        auto& a = comps_[c];
        const auto& b = o.comps_[c];
        for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
    }
    return *this;
}

DiscreteForm& DiscreteForm::operator*=(double c) {
    for (auto& comp : comps_)
        for (auto& v : comp) v *= c;
    return *this;
}

double inner(const DiscreteForm& f, const DiscreteForm& g) {
    if (f.grid() != g.grid() || f.degree() != g.degree())
        throw std::invalid_argument("form: grid/degree mismatch in inner product");
    double s = 0.0;
    for (int c = 0; c < f.component_count(); ++c) {
        const auto& a = f.comp(c);
        const auto& b = g.comp(c);
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    }
    return s * f.grid().cell_volume();
}

double l2_norm(const DiscreteForm& f) { return std::sqrt(std::max(0.0, inner(f, f))); }

std::vector<double> component_means(const DiscreteForm& f) {
    std::vector<double> out(static_cast<std::size_t>(f.component_count()), 0.0);
    const double inv = 1.0 / static_cast<double>(f.grid().size());
    for (int c = 0; c < f.component_count(); ++c) {
        double s = 0.0;
        for (double v : f.comp(c)) s += v;
        out[static_cast<std::size_t>(c)] = s * inv;
    }
    return out;
}

bool all_finite(const DiscreteForm& f) {
    for (int c = 0; c < f.component_count(); ++c)
        for (double v : f.comp(c))
            if (!std::isfinite(v)) return false;
    return true;
}

} // namespace hlog
