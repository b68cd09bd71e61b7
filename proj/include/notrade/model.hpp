#pragma once

#include <stdexcept>
#include <string>

namespace notrade {

// Error codes shared across the library. Each maps to a structured failure
// mode; the CLI translates them into exit codes.
enum class Errc {
    NonPositiveVolatility,
    NonPositiveRiskAversion,
    NonPositiveDrift,
    SpreadOutOfRange,
    DegenerateMerton,
    PoleEncountered,
    SignError,
    NoBracket,
    SpreadTooLarge,
    ZeroEndowment,
    NonPositiveHorizon,
    NumericalOverflow,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
  public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const { return code_; }

  private:
    Errc code_;
};

// Market and preference inputs. All rates are annualized continuous rates:
// mu is the excess return of the risky asset per year, sigma its volatility
// per sqrt-year, r the safe rate per year. gamma is relative risk aversion
// and eps the relative bid-ask spread (selling price is (1-eps)*S).
struct MarketParams {
    double mu = 0.0;
    double sigma = 0.0;
    double r = 0.0;
    double gamma = 0.0;
    double eps = 0.0;

    // Merton proportion mu/(gamma*sigma^2).
    double merton() const { return mu / (gamma * sigma * sigma); }
};

// Frictionless optimum: Merton weight and the equivalent safe rate at eps=0.
struct FrictionlessBaseline {
    double pi_star;
    double esr0;
};

// Returns params unchanged iff all invariants hold, otherwise throws an
// Error naming the violated field. mu <= 0 is rejected: the closed-form
// branch logic assumes mu > 0.
MarketParams validate(const MarketParams& params);

FrictionlessBaseline baseline(const MarketParams& params);

}  // namespace notrade
