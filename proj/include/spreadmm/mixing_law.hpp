#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "spreadmm/random.hpp"

namespace spreadmm {

enum class MgfKind { Exact, Truncated };

enum class IgParameterization { MeanShape, DeltaGamma };

const char* to_string(MgfKind kind);
const char* to_string(IgParameterization p);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct MomentTable {
    std::vector<double> values; // E[Y^k], k = 0..k_max
    int k_max() const { return static_cast<int>(values.size()) - 1; }
};

// User supplied law. All five capabilities are required.
struct CustomLawSpec {
    std::string name;
    std::function<double(double)> mgf;
    double domain_bound = kInfinity;
    std::vector<double> raw_moments; // E[Y^k] for k = 0..k_max, k_max >= 4
    std::function<double(double)> density;
    std::function<double(RandomStream&)> sampler;
};

// Law of the nonnegative mixing variable Y (or R in the elliptical model).
// Immutable after construction.
class MixingLaw {
public:
    // Exponential(1).
    MixingLaw();

    static MixingLaw exponential(double rate);
    static MixingLaw gamma(double shape, double scale);
    static MixingLaw inverse_gaussian(double p1, double p2,
                                      IgParameterization param = IgParameterization::MeanShape);
    // Chi-squared with `dof` degrees of freedom, i.e. Gamma(dof/2, 2).
    static MixingLaw chi_squared(double dof);
    // Point mass at `value`. Has no density; integrals against it are evaluations.
    static MixingLaw degenerate(double value);
    static MixingLaw custom(CustomLawSpec spec);

    // +inf when s >= domain_bound().
    double mgf(double s) const;
    double mgf_derivative(double s) const;
    double domain_bound() const;
    double truncated_mgf(double s) const;
    double truncated_mgf_derivative(double s) const;
    double mgf(double s, MgfKind kind) const;
    double mgf_derivative(double s, MgfKind kind) const;

    double raw_moment(int k) const;
    double log_raw_moment(int k) const;
    MomentTable moment_table(int k_max = 8) const;
    double mean() const { return raw_moment(1); }

    bool has_density() const;
    // Returns 0 for y <= 0.
    double density(double y) const;
    double log_density(double y) const;
    // Location of the atom for the degenerate law.
    std::optional<double> atom() const;

    double draw(RandomStream& rng) const;
    std::vector<double> sample(RandomStream& rng, std::size_t n) const;

    std::string family() const;
    std::string describe() const;
    std::optional<IgParameterization> ig_parameterization() const;

private:
    struct Exponential { double rate; };
    struct Gamma { double shape, scale; };
    struct InverseGaussian {
        double mean, shape;           // canonical (mu, lambda)
        double p1, p2;                // as supplied
        IgParameterization param;
    };
    struct Degenerate { double value; };
    struct Custom { CustomLawSpec spec; };

    using Variant = std::variant<Exponential, Gamma, InverseGaussian, Degenerate, Custom>;
    explicit MixingLaw(Variant v) : law_(std::move(v)) {}

    Variant law_;
};

} // namespace spreadmm
