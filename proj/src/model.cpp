#include "rsm/model.hpp"

#include <cctype>
#include <cmath>
#include <set>
#include <string>

#include "rsm/errors.hpp"
#include "rsm/linear.hpp"

namespace rsm {

std::vector<std::string> ModelSpec::labels() const {
  std::vector<std::string> out;
  out.reserve(terms.size());
  for (const Term& t : terms) out.push_back(t.label);
  return out;
}

int ModelSpec::index_of(const std::string& label) const {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (terms[i].label == label) return static_cast<int>(i);
  }
  return -1;
}

void ModelSpec::validate() const {
  if (k < 1) throw InputError("model must have at least one factor");
  if (terms.empty()) throw InputError("model has no terms");
  std::set<std::string> seen;
  for (const Term& t : terms) {
    if (static_cast<int>(t.exponents.size()) != k) {
      throw InputError("term '" + t.label + "' has " +
                       std::to_string(t.exponents.size()) +
                       " exponents but k = " + std::to_string(k));
    }
    if (!seen.insert(t.label).second) {
      throw InputError("duplicate term label '" + t.label + "'");
    }
  }
}

Term term_from_label(const std::string& label, int k) {
  if (static_cast<int>(label.size()) != k) {
    throw InputError("term label '" + label + "' must have " +
                     std::to_string(k) + " digits");
  }
  Term t;
  t.label = label;
  t.exponents.reserve(static_cast<std::size_t>(k));
  for (char ch : label) {
    if (!std::isdigit(static_cast<unsigned char>(ch))) {
      throw InputError("term label '" + label + "' must be digits only");
    }
    t.exponents.push_back(ch - '0' - 1);
  }
  return t;
}

namespace {

std::string label_for(const std::vector<int>& exponents) {
  std::string label;
  for (int e : exponents) label += static_cast<char>('0' + e + 1);
  return label;
}

Term term_from_exponents(std::vector<int> exponents) {
  Term t;
  t.label = label_for(exponents);
  t.exponents = std::move(exponents);
  return t;
}

}  // namespace

ModelSpec ipm_first_order(int k) {
  if (k < 1) throw InputError("model must have at least one factor");
  ModelSpec model;
  model.k = k;
  model.terms.push_back(term_from_exponents(std::vector<int>(k, 0)));
  for (int i = 0; i < k; ++i) {
    std::vector<int> e(static_cast<std::size_t>(k), 0);
    e[static_cast<std::size_t>(i)] = -1;
    model.terms.push_back(term_from_exponents(std::move(e)));
  }
  if (k > 1) {
    model.terms.push_back(term_from_exponents(std::vector<int>(k, -1)));
  }
  return model;
}

ModelSpec ipm_second_order(int k) {
  if (k != 2) {
    throw InputError("second-order inverse polynomial terms are defined for 2 factors");
  }
  ModelSpec model = ipm_first_order(2);
  model.terms.push_back(term_from_exponents({-1, 1}));  // "02"
  model.terms.push_back(term_from_exponents({1, -1}));  // "20"
  return model;
}

ModelSpec ipm_terms(int k, const std::vector<std::string>& labels) {
  ModelSpec model;
  model.k = k;
  for (const std::string& label : labels) {
    model.terms.push_back(term_from_label(label, k));
  }
  model.validate();
  return model;
}

double ParamVector::at(const std::string& label) const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return values[static_cast<Eigen::Index>(i)];
  }
  throw InputError("no parameter named '" + label + "'");
}

ParamVector make_params(const ModelSpec& model, const Eigen::VectorXd& values) {
  if (values.size() != model.term_count()) {
    throw InputError("parameter vector has " + std::to_string(values.size()) +
                     " entries but the model has " +
                     std::to_string(model.term_count()) + " terms");
  }
  return ParamVector{model.labels(), values};
}

namespace {

double ipow(double x, int e) {
  if (e == 0) return 1.0;
  const bool invert = e < 0;
  unsigned n = static_cast<unsigned>(invert ? -e : e);
  double acc = 1.0;
  double base = x;
  while (n > 0) {
    if (n & 1u) acc *= base;
    base *= base;
    n >>= 1;
  }
  return invert ? 1.0 / acc : acc;
}

}  // namespace

Eigen::MatrixXd model_matrix(const Eigen::MatrixXd& points, const ModelSpec& model) {
  model.validate();
  if (points.cols() != model.k) {
    throw InputError("points have " + std::to_string(points.cols()) +
                     " coordinates but the model has k = " + std::to_string(model.k));
  }
  Eigen::MatrixXd F(points.rows(), model.term_count());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (int t = 0; t < model.term_count(); ++t) {
      const Term& term = model.terms[static_cast<std::size_t>(t)];
      double value = 1.0;
      for (int j = 0; j < model.k; ++j) {
        const int e = term.exponents[static_cast<std::size_t>(j)];
        const double xj = points(i, j);
        if (e < 0 && xj == 0.0) {
          throw InputError("x" + std::to_string(j + 1) +
                           " is zero with a negative exponent (row " +
                           std::to_string(i + 1) + ")");
        }
        value *= ipow(xj, e);
      }
      F(i, t) = value;
    }
  }
  return F;
}

Eigen::VectorXd eval_linear_predictor(const Eigen::MatrixXd& features,
                                      const Eigen::VectorXd& theta) {
  if (features.cols() != theta.size()) {
    throw InputError("feature matrix has " + std::to_string(features.cols()) +
                     " columns but theta has " + std::to_string(theta.size()) +
                     " entries");
  }
  return features * theta;
}

double eta_floor(const Eigen::VectorXd& theta) {
  return 1e-12 * (1.0 + theta.cwiseAbs().sum());
}

Eigen::VectorXd eval_response(const Eigen::MatrixXd& features,
                              const Eigen::VectorXd& theta) {
  const Eigen::VectorXd eta = eval_linear_predictor(features, theta);
  const double floor = eta_floor(theta);
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    if (std::abs(eta[i]) <= floor) {
      throw SingularityError("linear predictor vanishes at row " +
                             std::to_string(i + 1));
    }
  }
  return eta.cwiseInverse();
}

Eigen::MatrixXd jacobian(const Eigen::MatrixXd& features,
                         const Eigen::VectorXd& theta) {
  const Eigen::VectorXd eta = eval_linear_predictor(features, theta);
  const double floor = eta_floor(theta);
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    if (std::abs(eta[i]) <= floor) {
      throw SingularityError("linear predictor vanishes at row " +
                             std::to_string(i + 1));
    }
  }
  const Eigen::VectorXd scale = (-eta.array().square().inverse()).matrix();
  return scale.asDiagonal() * features;
}

Eigen::VectorXd reciprocal_ols_start(const ModelSpec& model, const Dataset& data) {
  data.validate();
  if (data.factors() != model.k) {
    throw InputError("dataset has " + std::to_string(data.factors()) +
                     " factors but the model expects " + std::to_string(model.k));
  }
  const Eigen::MatrixXd F = model_matrix(data.x, model);
  const Eigen::VectorXd z = data.y.cwiseInverse();
  return ols_fit(F, z).coefficients;
}

}  // namespace rsm
