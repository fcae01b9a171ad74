#pragma once

#include <cmath>
#include <stdexcept>

namespace helmpinn {

enum class ActivationKind { SinScaled, Tanh, Linear };

/// Per-layer activation. SinScaled applies sigma(z) = sin(scale * z);
/// the scale is ignored by Tanh and Linear.
struct ActivationSpec {
  ActivationKind kind = ActivationKind::SinScaled;
  double scale = 1.0;

  void validate() const {
    if (kind == ActivationKind::SinScaled && !(scale > 0.0))
      throw std::invalid_argument("activation scale must be > 0");
  }

  static ActivationSpec sin_scaled(double scale) {
    return {ActivationKind::SinScaled, scale};
  }
  static ActivationSpec tanh() { return {ActivationKind::Tanh, 1.0}; }
  static ActivationSpec linear() { return {ActivationKind::Linear, 1.0}; }
};

inline bool operator==(const ActivationSpec& a, const ActivationSpec& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == ActivationKind::SinScaled) return a.scale == b.scale;
  return true;
}

/// Value and first three derivatives of an activation at z. The PDE loss
/// needs sigma'' (Laplacian of the network) and its parameter gradient
/// needs sigma'''.
template <typename Scalar>
struct ActivationDerivs {
  Scalar s0, s1, s2, s3;
};

template <typename Scalar>
inline ActivationDerivs<Scalar> activation_derivs(const ActivationSpec& act,
                                                  Scalar z) {
  ActivationDerivs<Scalar> d;
  switch (act.kind) {
    case ActivationKind::SinScaled: {
      const Scalar a = static_cast<Scalar>(act.scale);
      const Scalar s = std::sin(a * z);
      const Scalar c = std::cos(a * z);
      d.s0 = s;
      d.s1 = a * c;
      d.s2 = -a * a * s;
      d.s3 = -a * a * a * c;
      break;
    }
    case ActivationKind::Tanh: {
      const Scalar t = std::tanh(z);
      const Scalar u = Scalar(1) - t * t;
      d.s0 = t;
      d.s1 = u;
      d.s2 = Scalar(-2) * t * u;
      d.s3 = u * (Scalar(6) * t * t - Scalar(2));
      break;
    }
    case ActivationKind::Linear:
      d.s0 = z;
      d.s1 = Scalar(1);
      d.s2 = Scalar(0);
      d.s3 = Scalar(0);
      break;
  }
  return d;
}

} // namespace helmpinn
