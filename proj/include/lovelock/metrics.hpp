#pragma once

#include <Eigen/Dense>

#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "lovelock/signature.hpp"
#include "lovelock/tensor.hpp"

namespace lovelock {

// Metric and its partial derivatives at one point.
struct MetricSample {
    int m = 0;
    std::vector<double> x;
    Eigen::MatrixXd g;
    Eigen::MatrixXd ginv;
    Tensor dg;   // d_rho g_{mu nu} at (rho, mu, nu)
    Tensor ddg;  // d_rho d_sigma g_{mu nu} at (rho, sigma, mu, nu)
    double det_g = 0.0;
};

// Fills ginv and det_g, validates the symmetry invariants.
MetricSample finalize_sample(MetricSample s);

// Evaluates g, dg, ddg at a point. Implementations are stateless after construction.
class MetricSource {
public:
    virtual ~MetricSource() = default;
    virtual std::string name() const = 0;
    virtual int dim() const = 0;
    virtual Signature signature() const = 0;
    virtual MetricSample sample(std::span<const double> x) const = 0;
    // A point inside the evaluator domain, used when none is given.
    virtual std::vector<double> default_point() const = 0;
};

using MetricParams = std::map<std::string, std::string>;

// Built-ins: minkowski, schwarzschild, sphere, sphere-product, random-poly.
std::unique_ptr<MetricSource> make_builtin_metric(const std::string& name, const MetricParams& params);

std::unique_ptr<MetricSource> make_random_poly_metric(int dim, unsigned long long seed, double eps,
                                                      const Signature& eta);

// Tabulated samples; evaluation is only defined at the listed points.
class TabulatedMetric final : public MetricSource {
public:
    TabulatedMetric(Signature eta, std::vector<MetricSample> points);
    static std::unique_ptr<TabulatedMetric> from_json_text(const std::string& text);
    static std::unique_ptr<TabulatedMetric> from_file(const std::string& path);

    std::string name() const override { return "tabulated"; }
    int dim() const override { return eta_.m(); }
    Signature signature() const override { return eta_; }
    MetricSample sample(std::span<const double> x) const override;
    std::vector<double> default_point() const override { return points_.front().x; }
    const std::vector<MetricSample>& points() const { return points_; }
    std::string to_json_text() const;

private:
    Signature eta_;
    std::vector<MetricSample> points_;
};

// Resolves a built-in name, or otherwise reads a tabulated JSON file.
std::unique_ptr<MetricSource> resolve_metric(const std::string& name_or_path, const MetricParams& params);

}  // namespace lovelock
