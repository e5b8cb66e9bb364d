#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "rsm/dataset.hpp"
#include "rsm/design.hpp"

namespace rsm {

/// One term of the inverse polynomial linear predictor: a label such as
/// "01" and the integer exponent of each factor in the monomial.
struct Term {
  std::string label;
  std::vector<int> exponents;
};

/// A concrete inverse polynomial model: the response is the reciprocal of
/// a linear combination of factor monomials,
///   y(x) = 1 / sum_t theta_t * prod_i x_i^{e_ti}.
struct ModelSpec {
  int k = 0;
  std::vector<Term> terms;

  int term_count() const { return static_cast<int>(terms.size()); }
  std::vector<std::string> labels() const;
  /// Position of the term with this label, or -1.
  int index_of(const std::string& label) const;
  /// Throws InputError on duplicate labels or exponent/k mismatches.
  void validate() const;
};

/// Two-factor label grammar: label digit d_i maps factor i to exponent
/// d_i - 1, so "11" is the constant term, "01" is 1/x1, "21" is x1, and
/// so on. Digits 0..9 give exponents -1..8.
Term term_from_label(const std::string& label, int k);

/// Constant plus the pure reciprocals: {"11","01","10","00"} for k = 2.
ModelSpec ipm_first_order(int k);

/// First order extended by the mixed terms {"02","20"} (k = 2 only).
ModelSpec ipm_second_order(int k);

/// Model from an explicit label list, kept in the given order.
ModelSpec ipm_terms(int k, const std::vector<std::string>& labels);

/// Parameter vector with the owning model's term labels attached.
struct ParamVector {
  std::vector<std::string> labels;
  Eigen::VectorXd values;

  double at(const std::string& label) const;
};

ParamVector make_params(const ModelSpec& model, const Eigen::VectorXd& values);

/// Monomial features of each point, one column per model term.
Eigen::MatrixXd model_matrix(const Eigen::MatrixXd& points,
                             const ModelSpec& model);

/// Linear predictor eta = F theta for precomputed features.
Eigen::VectorXd eval_linear_predictor(const Eigen::MatrixXd& features,
                                      const Eigen::VectorXd& theta);

/// Guard magnitude below which eta is treated as vanishing.
double eta_floor(const Eigen::VectorXd& theta);

/// Fitted responses y = 1/eta; |eta| at or below the floor is an error
/// naming the offending row.
Eigen::VectorXd eval_response(const Eigen::MatrixXd& features,
                              const Eigen::VectorXd& theta);

/// d y_j / d theta_t = -eta_j^{-2} F_{jt}, evaluated row-wise.
Eigen::MatrixXd jacobian(const Eigen::MatrixXd& features,
                         const Eigen::VectorXd& theta);

/// Starting values: ordinary least squares of 1/y on the term monomials.
Eigen::VectorXd reciprocal_ols_start(const ModelSpec& model,
                                     const Dataset& data);

}  // namespace rsm
