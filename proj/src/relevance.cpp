#include "relrep/relevance.hpp"

#include "relrep/errors.hpp"

#include <cmath>
#include <string>

namespace relrep {

std::string_view to_string(EffectScale scale) {
    switch (scale) {
    case EffectScale::identity: return "identity";
    case EffectScale::log: return "log";
    case EffectScale::logit: return "logit";
    case EffectScale::standardized: return "standardized";
    }
    return "identity";
}

EffectScale parse_effect_scale(std::string_view label) {
    if (label == "identity") return EffectScale::identity;
    if (label == "log") return EffectScale::log;
    if (label == "logit") return EffectScale::logit;
    if (label == "standardized") return EffectScale::standardized;
    throw UsageError("unknown effect scale '" + std::string(label) + "'");
}

double transform_effect(double raw, EffectScale scale, std::optional<double> sigma) {
    if (!std::isfinite(raw)) throw DomainError("raw effect must be finite");
    if (sigma && scale != EffectScale::standardized) {
        throw UsageError("sigma is only meaningful for the standardized scale");
    }
    switch (scale) {
    case EffectScale::identity:
        return raw;
    case EffectScale::log:
        if (!(raw > 0.0)) throw DomainError("log scale requires a positive value");
        return std::log(raw);
    case EffectScale::logit:
        if (!(raw > 0.0 && raw < 1.0)) throw DomainError("logit scale requires a value in (0, 1)");
        return std::log(raw / (1.0 - raw));
    case EffectScale::standardized:
        if (!sigma) throw UsageError("standardized scale requires sigma");
        if (!(*sigma > 0.0) || !std::isfinite(*sigma)) throw DomainError("sigma must be positive");
        return raw / (2.0 * *sigma);
    }
    return raw;
}

RelevanceTriple relevance_triple(double eff, double halfwidth, double zeta) {
    if (!(zeta > 0.0)) throw DomainError("relevance threshold must be positive");
    if (!(halfwidth >= 0.0)) throw DomainError("interval half-width must be nonnegative");
    return RelevanceTriple{(eff - halfwidth) / zeta, eff / zeta, (eff + halfwidth) / zeta, zeta};
}

RowLabel EffectClass::row() const {
    switch (label) {
    case EffectLabel::Rlv: return RowLabel::Rlv;
    case EffectLabel::AmbSig: return RowLabel::Sig;
    case EffectLabel::Amb: return RowLabel::Amb;
    case EffectLabel::Ngl:
    case EffectLabel::NglSig: return RowLabel::Ngl;
    case EffectLabel::Ctr: return RowLabel::Ctr;
    }
    return RowLabel::Amb;
}

EffectLabel EffectClass::base() const {
    switch (label) {
    case EffectLabel::NglSig: return EffectLabel::Ngl;
    case EffectLabel::AmbSig: return EffectLabel::Amb;
    default: return label;
    }
}

std::string_view to_string(EffectLabel label) {
    switch (label) {
    case EffectLabel::Rlv: return "Rlv";
    case EffectLabel::Ngl: return "Ngl";
    case EffectLabel::NglSig: return "Ngl.Sig";
    case EffectLabel::Ctr: return "Ctr";
    case EffectLabel::Amb: return "Amb";
    case EffectLabel::AmbSig: return "Amb.Sig";
    }
    return "Amb";
}

std::string_view to_string(RowLabel label) {
    switch (label) {
    case RowLabel::Rlv: return "Rlv";
    case RowLabel::Sig: return "Sig";
    case RowLabel::Amb: return "Amb";
    case RowLabel::Ngl: return "Ngl";
    case RowLabel::Ctr: return "Ctr";
    }
    return "Amb";
}

EffectLabel parse_effect_label(std::string_view label) {
    if (label == "Rlv") return EffectLabel::Rlv;
    if (label == "Ngl") return EffectLabel::Ngl;
    if (label == "Ngl.Sig") return EffectLabel::NglSig;
    if (label == "Ctr") return EffectLabel::Ctr;
    if (label == "Amb") return EffectLabel::Amb;
    if (label == "Amb.Sig") return EffectLabel::AmbSig;
    throw UsageError("unknown effect class '" + std::string(label) + "'");
}

RowLabel parse_row_label(std::string_view label) {
    if (label == "Rlv") return RowLabel::Rlv;
    if (label == "Sig") return RowLabel::Sig;
    if (label == "Amb") return RowLabel::Amb;
    if (label == "Ngl") return RowLabel::Ngl;
    if (label == "Ctr") return RowLabel::Ctr;
    throw UsageError("unknown row class '" + std::string(label) + "'");
}

EffectClass classify_effect(const RelevanceTriple& triple) {
    if (std::isnan(triple.rls) || std::isnan(triple.rlp)) {
        throw DomainError("relevance bounds must not be NaN");
    }
    if (triple.rls > triple.rlp) {
        throw InvariantError("secured relevance exceeds potential relevance");
    }
    if (triple.rls >= 1.0) return {EffectLabel::Rlv};
    if (triple.rlp < 0.0) return {EffectLabel::Ctr};
    const bool significant = triple.rls > 0.0;
    if (triple.rlp < 1.0) return {significant ? EffectLabel::NglSig : EffectLabel::Ngl};
    return {significant ? EffectLabel::AmbSig : EffectLabel::Amb};
}

} // namespace relrep
