#include "qbnn/bnn.hpp"

namespace qbnn::bnn {

int hamming_distance(const Eigen::VectorXi& a, const Eigen::VectorXi& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("hamming_distance: length mismatch");
    int h = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) h += (a[i] != 0) != (b[i] != 0);
    return h;
}

overlap::HyperplaneConstraint emulate_quantum_constraint(const Eigen::VectorXi& w_star,
                                                         std::uint64_t center_seed) {
    Rng rng(center_seed);
    Eigen::VectorXi center(w_star.size());
    for (Eigen::Index i = 0; i < center.size(); ++i)
        center[i] = static_cast<int>(rng.below(2));
    const int h = hamming_distance(center, w_star);
    return overlap::build_constraint(std::move(center), h);
}

}  // namespace qbnn::bnn
