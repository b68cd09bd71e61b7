#include "notrade/model.hpp"

namespace notrade {

const char* errc_name(Errc code) {
    switch (code) {
        case Errc::NonPositiveVolatility: return "NonPositiveVolatility";
        case Errc::NonPositiveRiskAversion: return "NonPositiveRiskAversion";
        case Errc::NonPositiveDrift: return "NonPositiveDrift";
        case Errc::SpreadOutOfRange: return "SpreadOutOfRange";
        case Errc::DegenerateMerton: return "DegenerateMerton";
        case Errc::PoleEncountered: return "PoleEncountered";
        case Errc::SignError: return "SignError";
        case Errc::NoBracket: return "NoBracket";
        case Errc::SpreadTooLarge: return "SpreadTooLarge";
        case Errc::ZeroEndowment: return "ZeroEndowment";
        case Errc::NonPositiveHorizon: return "NonPositiveHorizon";
        case Errc::NumericalOverflow: return "NumericalOverflow";
    }
    return "UnknownError";
}

MarketParams validate(const MarketParams& params) {
    if (!(params.sigma > 0.0))
        throw Error(Errc::NonPositiveVolatility, "sigma must be > 0, got " + std::to_string(params.sigma));
    if (!(params.gamma > 0.0))
        throw Error(Errc::NonPositiveRiskAversion, "gamma must be > 0, got " + std::to_string(params.gamma));
    if (!(params.mu > 0.0))
        throw Error(Errc::NonPositiveDrift, "mu must be > 0, got " + std::to_string(params.mu));
    if (!(params.eps >= 0.0 && params.eps < 1.0))
        throw Error(Errc::SpreadOutOfRange, "eps must lie in [0, 1), got " + std::to_string(params.eps));
    return params;
}

FrictionlessBaseline baseline(const MarketParams& params) {
    const double pi_star = params.merton();
    const double esr0 = params.r + params.mu * params.mu / (2.0 * params.gamma * params.sigma * params.sigma);
    return {pi_star, esr0};
}

}  // namespace notrade
