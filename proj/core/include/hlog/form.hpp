#pragma once

#include <cstdint>
#include <vector>

#include "hlog/grid.hpp"

namespace hlog {

/// Ordered index tuples for Lambda^l in lexicographic order, e.g. for n=3,
/// l=2: (0,1), (0,2), (1,2).  Axes are 0-based.
using IndexTuple = std::vector<int>;

/// All ascending l-tuples out of {0,...,n-1}, lexicographic.
const std::vector<IndexTuple>& form_tuples(int n, int degree);

/// Number of components C(n, l).
int form_component_count(int n, int degree);

/// Rank of an ascending tuple within form_tuples(n, |I|). Returns -1 if the
/// tuple is not ascending or out of range.
int form_tuple_index(int n, const IndexTuple& I);

/// Merge two disjoint ascending tuples into an ascending tuple and return the
/// sign of the interleaving permutation.  Returns 0 if they intersect.
int merge_tuples(const IndexTuple& I, const IndexTuple& J, IndexTuple& out);

/// Sign of e^j wedge e^I = sign * e^{insert(j, I)}; 0 if j is in I.
int insertion_sign(int j, const IndexTuple& I);

/// Degree-l differential form on a periodic grid.  One real scalar field per
/// ordered tuple, stored row-major (axis 0 slowest).  The pointwise norm used
/// by all L^p functionals is the Euclidean norm across components.
class DiscreteForm {
public:
    DiscreteForm(const Grid& grid, int degree)
        : grid_(grid), degree_(degree),
          comps_(form_component_count(grid.dim(), degree),
                 std::vector<double>(grid.size(), 0.0)) {
        if (degree < 0 || degree > grid.dim())
            throw config_error("form: degree out of range");
    }

    const Grid& grid() const { return grid_; }
    int degree() const { return degree_; }
    int component_count() const { return static_cast<int>(comps_.size()); }

    std::vector<double>& comp(int c) { return comps_[static_cast<std::size_t>(c)]; }
    const std::vector<double>& comp(int c) const { return comps_[static_cast<std::size_t>(c)]; }

    const std::vector<IndexTuple>& tuples() const { return form_tuples(grid_.dim(), degree_); }

    /// Pointwise Euclidean norm across components at flat index f.
    double norm_at(std::size_t f) const {
        double s = 0.0;
        for (const auto& c : comps_) s += c[f] * c[f];
        return std::sqrt(s);
    }

    /// |f| as a scalar field.
    std::vector<double> pointwise_norm() const {
        std::vector<double> out(grid_.size(), 0.0);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = norm_at(i);
        return out;
    }

    DiscreteForm& operator+=(const DiscreteForm& o);
    DiscreteForm& operator-=(const DiscreteForm& o);
    DiscreteForm& operator*=(double c);

    friend DiscreteForm operator+(DiscreteForm a, const DiscreteForm& b) { return a += b; }
    friend DiscreteForm operator-(DiscreteForm a, const DiscreteForm& b) { return a -= b; }
    friend DiscreteForm operator*(double c, DiscreteForm a) { return a *= c; }

private:
    Grid grid_;
    int degree_;
    std::vector<std::vector<double>> comps_;
};

/// Grid inner product <f,g> = h^n sum_I sum_x f_I g_I.
double inner(const DiscreteForm& f, const DiscreteForm& g);

/// L2 norm sqrt(<f,f>).
double l2_norm(const DiscreteForm& f);

/// Componentwise means (the zero-frequency part).
std::vector<double> component_means(const DiscreteForm& f);

/// True if every sample of every component is finite.
bool all_finite(const DiscreteForm& f);

} // namespace hlog
