#pragma once

#include "pairlearn/types.hpp"

#include <limits>
#include <string>

namespace pairlearn {

enum class LossKind { phi_rank, phi_rank_smoothed, ls_rank };

/// Margin function of the phi-ranking losses. All satisfy phi(0) = 1.
enum class Phi {
    logistic2,   // log2(1 + e^v)
    hinge,       // max{0, 1 + v}
    exponential  // e^v
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Certified constants of a pairwise loss in its last argument t.
struct LossMetadata {
    double lip1 = kInfinity;  // |L|_1, infinite when only locally Lipschitz
    double c_l1 = kInfinity;  // sup |D5 L|
    double c_l2 = kInfinity;  // sup |D5 D5 L|
    bool convex = true;
    bool differentiable = true;
    bool twice_differentiable = true;
    bool locally_lipschitz = true;

    friend bool operator==(const LossMetadata &, const LossMetadata &) = default;
};

/// Pairwise loss L(x, y, x', y', t).
///
///   phi_rank:          phi(sign(y - y') t), sign(0) = 0
///   phi_rank_smoothed: phi(tanh((y - y') / sigma) t)
///   ls_rank:           (y - y' - t)^2
///
/// None of the implemented losses depends on x or x'; the inputs are kept in the
/// signatures to match the general pairwise form.
class PairwiseLoss {
public:
    static PairwiseLoss phi_rank(Phi phi);
    static PairwiseLoss phi_rank_smoothed(Phi phi, double sigma = 0.1);
    static PairwiseLoss ls_rank();

    [[nodiscard]] LossKind kind() const { return kind_; }
    [[nodiscard]] Phi phi() const { return phi_; }
    [[nodiscard]] double sigma() const { return sigma_; }
    [[nodiscard]] const LossMetadata &metadata() const { return meta_; }
    [[nodiscard]] bool is_lipschitz() const { return meta_.lip1 < kInfinity; }

    /// Stable identifier, e.g. "phi_rank_smoothed/logistic2/sigma=0.1".
    [[nodiscard]] std::string tag() const;

    /// Multiplier s(y - y') of t inside phi (phi losses only).
    [[nodiscard]] double margin_scale(double y, double yp) const;

    // Fast paths used by the solvers; they skip input validation.
    [[nodiscard]] double value(double y, double yp, double t) const;
    [[nodiscard]] double first(double y, double yp, double t) const;
    [[nodiscard]] double second(double y, double yp, double t) const;
    /// First derivative, or for hinge the right derivative (phi'(-1) := 1).
    [[nodiscard]] double subgradient(double y, double yp, double t) const;

    friend bool operator==(const PairwiseLoss &, const PairwiseLoss &) = default;

private:
    PairwiseLoss(LossKind kind, Phi phi, double sigma);

    LossKind kind_;
    Phi phi_;
    double sigma_;
    LossMetadata meta_;
};

[[nodiscard]] double loss_eval(const PairwiseLoss &L, const InputPoint &x, double y, const InputPoint &xp, double yp,
                               double t);
/// L*(x,y,x',y',t) = L(x,y,x',y',t) - L(x,y,x',y',0).
[[nodiscard]] double shifted_eval(const PairwiseLoss &L, const InputPoint &x, double y, const InputPoint &xp,
                                  double yp, double t);
/// D5 L; identical for L and L*. Throws UnsupportedOperation for hinge.
[[nodiscard]] double d5(const PairwiseLoss &L, const InputPoint &x, double y, const InputPoint &xp, double yp,
                        double t);
/// D5 D5 L. Throws UnsupportedOperation for hinge.
[[nodiscard]] double d5d5(const PairwiseLoss &L, const InputPoint &x, double y, const InputPoint &xp, double yp,
                          double t);
[[nodiscard]] double lipschitz_constant(const PairwiseLoss &L);

[[nodiscard]] std::string to_string(LossKind kind);
[[nodiscard]] LossKind loss_kind_from_string(const std::string &s);
[[nodiscard]] std::string to_string(Phi phi);
[[nodiscard]] Phi phi_from_string(const std::string &s);

}  // namespace pairlearn
