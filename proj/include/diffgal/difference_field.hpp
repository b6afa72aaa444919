#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "diffgal/rational_function.hpp"

namespace diffgal {

struct SigmaOperator {
  enum class Kind { identity, shift, dilation };
  Kind kind = Kind::identity;
  Rational c = 0;  // shift amount, or dilation factor q

  static SigmaOperator identity() { return {}; }
  static SigmaOperator shift(const Rational& c);     // c != 0
  static SigmaOperator dilation(const Rational& q);  // q != 0, q != 1, q != -1
  // "identity", "shift:<c>" or "dilation:<q>".
  static SigmaOperator parse(std::string_view s);
  SigmaOperator inverse() const;
  std::string str() const;
  friend bool operator==(const SigmaOperator&, const SigmaOperator&) = default;
};

class DifferenceFieldSpec {
 public:
  DifferenceFieldSpec() = default;
  DifferenceFieldSpec(SigmaOperator sigma, std::vector<std::string> parameters);

  const SigmaOperator& sigma() const { return sigma_; }
  const std::vector<std::string>& parameters() const { return parameters_; }
  // t together with the parameters.
  std::set<std::string> symbols() const;
  DifferenceFieldSpec inverse() const { return {sigma_.inverse(), parameters_}; }

 private:
  SigmaOperator sigma_;
  std::vector<std::string> parameters_;
};

// Image of t under sigma^k.
RationalFunction sigma_image_of_t(const SigmaOperator& s, long k = 1);
// sigma^k applied to f: t moves, every other symbol is fixed.
RationalFunction sigma_apply(const DifferenceFieldSpec& spec, const RationalFunction& f, long k = 1);
bool is_constant(const DifferenceFieldSpec& spec, const RationalFunction& f);

class SigmaCertificate {
 public:
  // Throws DomainError unless a^m = sigma(r)/r.
  SigmaCertificate(const DifferenceFieldSpec& spec, const RationalFunction& a, RationalFunction r,
                   unsigned m);
  const RationalFunction& r() const { return r_; }
  unsigned m() const { return m_; }

 private:
  RationalFunction r_;
  unsigned m_;
};

// Least m <= max_order with a^m = sigma(r)/r, if any. Shift operators need a in
// Q(t) or a constant; dilation operators are rejected with Unsupported.
std::optional<SigmaCertificate> sigma_quotient_certificate(const DifferenceFieldSpec& spec,
                                                           const RationalFunction& a,
                                                           unsigned max_order = 12);

struct Order1Group {
  enum class Kind { trivial, mu, full_up_to_bound };
  Kind kind;
  unsigned m = 0;  // order of the root-of-unity group for trivial/mu
  std::optional<SigmaCertificate> certificate;
  unsigned bound = 0;
  std::string label() const;  // "trivial", "mu_<m>", "full-multiplicative-group-up-to-bound"
};

Order1Group order1_group(const DifferenceFieldSpec& spec, const RationalFunction& a,
                         unsigned max_order = 12);

}  // namespace diffgal
