#include "pairlearn/loss.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace pairlearn {

namespace {

constexpr double kInvLn2 = 1.0 / std::numbers::ln2;

double sigmoid(double v) {
    if (v >= 0.0) { return 1.0 / (1.0 + std::exp(-v)); }
    const double e = std::exp(v);
    return e / (1.0 + e);
}

double softplus(double v) { return v > 0.0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v)); }

double phi_value(Phi phi, double v) {
    switch (phi) {
        case Phi::logistic2: return softplus(v) * kInvLn2;
        case Phi::hinge: return std::max(0.0, 1.0 + v);
        case Phi::exponential: return std::exp(v);
    }
    return 0.0;
}

double phi_first(Phi phi, double v) {
    switch (phi) {
        case Phi::logistic2: return sigmoid(v) * kInvLn2;
        case Phi::hinge: return v >= -1.0 ? 1.0 : 0.0;  // right derivative at the kink
        case Phi::exponential: return std::exp(v);
    }
    return 0.0;
}

double phi_second(Phi phi, double v) {
    switch (phi) {
        case Phi::logistic2: {
            const double s = sigmoid(v);
            return s * (1.0 - s) * kInvLn2;
        }
        case Phi::hinge: throw UnsupportedOperation("hinge phi has no second derivative");
        case Phi::exponential: return std::exp(v);
    }
    return 0.0;
}

void check_inputs(const InputPoint &x, double y, const InputPoint &xp, double yp, double t) {
    require_finite(x, "loss");
    require_finite(xp, "loss");
    if (!std::isfinite(y) || !std::isfinite(yp) || !std::isfinite(t)) { throw InvalidInput("loss: non-finite input"); }
}

}  // namespace

PairwiseLoss::PairwiseLoss(LossKind kind, Phi phi, double sigma) : kind_(kind), phi_(phi), sigma_(sigma) {
    if (kind_ == LossKind::ls_rank) {
        meta_ = {kInfinity, kInfinity, 2.0, true, true, true, true};
        return;
    }
    if (kind_ == LossKind::phi_rank_smoothed && (!(sigma_ > 0.0) || !std::isfinite(sigma_))) {
        throw InvalidInput("loss: sigma must be positive");
    }
    // |s(y - y')| <= 1 for both sign and tanh, so the constants of phi carry over
    switch (phi_) {
        case Phi::logistic2:
            // phi'' = sigmoid (1 - sigmoid) / ln 2 peaks at v = 0
            meta_ = {kInvLn2, kInvLn2, 0.25 * kInvLn2, true, true, true, true};
            break;
        case Phi::hinge: meta_ = {1.0, 1.0, kInfinity, true, false, false, true}; break;
        case Phi::exponential: meta_ = {kInfinity, kInfinity, kInfinity, true, true, true, true}; break;
    }
}

PairwiseLoss PairwiseLoss::phi_rank(Phi phi) { return {LossKind::phi_rank, phi, 0.0}; }

PairwiseLoss PairwiseLoss::phi_rank_smoothed(Phi phi, double sigma) {
    return {LossKind::phi_rank_smoothed, phi, sigma};
}

PairwiseLoss PairwiseLoss::ls_rank() { return {LossKind::ls_rank, Phi::logistic2, 0.0}; }

std::string PairwiseLoss::tag() const {
    std::ostringstream os;
    os << to_string(kind_);
    if (kind_ != LossKind::ls_rank) { os << "/" << to_string(phi_); }
    if (kind_ == LossKind::phi_rank_smoothed) { os << "/sigma=" << sigma_; }
    return os.str();
}

double PairwiseLoss::margin_scale(double y, double yp) const {
    if (kind_ == LossKind::phi_rank) { return static_cast<double>((y > yp) - (y < yp)); }
    return std::tanh((y - yp) / sigma_);
}

double PairwiseLoss::value(double y, double yp, double t) const {
    if (kind_ == LossKind::ls_rank) {
        const double r = y - yp - t;
        return r * r;
    }
    return phi_value(phi_, margin_scale(y, yp) * t);
}

double PairwiseLoss::first(double y, double yp, double t) const {
    if (!meta_.differentiable) { throw UnsupportedOperation("loss " + tag() + " is not differentiable"); }
    return subgradient(y, yp, t);
}

double PairwiseLoss::subgradient(double y, double yp, double t) const {
    if (kind_ == LossKind::ls_rank) { return -2.0 * (y - yp - t); }
    const double s = margin_scale(y, yp);
    return s * phi_first(phi_, s * t);
}

double PairwiseLoss::second(double y, double yp, double t) const {
    if (!meta_.twice_differentiable) { throw UnsupportedOperation("loss " + tag() + " is not twice differentiable"); }
    if (kind_ == LossKind::ls_rank) { return 2.0; }
    const double s = margin_scale(y, yp);
    return s * s * phi_second(phi_, s * t);
}

double loss_eval(const PairwiseLoss &L, const InputPoint &x, double y, const InputPoint &xp, double yp, double t) {
    check_inputs(x, y, xp, yp, t);
    return L.value(y, yp, t);
}

double shifted_eval(const PairwiseLoss &L, const InputPoint &x, double y, const InputPoint &xp, double yp, double t) {
    check_inputs(x, y, xp, yp, t);
    if (t == 0.0) { return 0.0; }
    return L.value(y, yp, t) - L.value(y, yp, 0.0);
}

double d5(const PairwiseLoss &L, const InputPoint &x, double y, const InputPoint &xp, double yp, double t) {
    check_inputs(x, y, xp, yp, t);
    return L.first(y, yp, t);
}

double d5d5(const PairwiseLoss &L, const InputPoint &x, double y, const InputPoint &xp, double yp, double t) {
    check_inputs(x, y, xp, yp, t);
    return L.second(y, yp, t);
}

double lipschitz_constant(const PairwiseLoss &L) { return L.metadata().lip1; }

std::string to_string(LossKind kind) {
    switch (kind) {
        case LossKind::phi_rank: return "phi_rank";
        case LossKind::phi_rank_smoothed: return "phi_rank_smoothed";
        case LossKind::ls_rank: return "ls_rank";
    }
    return "?";
}

LossKind loss_kind_from_string(const std::string &s) {
    if (s == "phi_rank") { return LossKind::phi_rank; }
    if (s == "phi_rank_smoothed") { return LossKind::phi_rank_smoothed; }
    if (s == "ls_rank") { return LossKind::ls_rank; }
    throw InvalidInput("unknown loss kind '" + s + "'");
}

std::string to_string(Phi phi) {
    switch (phi) {
        case Phi::logistic2: return "logistic2";
        case Phi::hinge: return "hinge";
        case Phi::exponential: return "exponential";
    }
    return "?";
}

Phi phi_from_string(const std::string &s) {
    if (s == "logistic2") { return Phi::logistic2; }
    if (s == "hinge") { return Phi::hinge; }
    if (s == "exponential") { return Phi::exponential; }
    throw InvalidInput("unknown phi '" + s + "'");
}

}  // namespace pairlearn
