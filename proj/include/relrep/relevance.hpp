#pragma once

#include <optional>
#include <string_view>

namespace relrep {

enum class EffectScale { identity, log, logit, standardized };

std::string_view to_string(EffectScale scale);
EffectScale parse_effect_scale(std::string_view label);

/// Maps a raw effect onto a scale where a constant relevance threshold applies.
/// `sigma` is required for (and only for) the standardized scale.
double transform_effect(double raw, EffectScale scale, std::optional<double> sigma = std::nullopt);

/// Default relevance threshold for log, logit and standardized effects.
inline constexpr double kDefaultZeta = 0.1;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    double center() const { return 0.5 * (lo + hi); }
    double halfwidth() const { return 0.5 * (hi - lo); }
    bool contains(double x) const { return lo <= x && x <= hi; }
    bool intersects(const Interval& other) const { return lo <= other.hi && other.lo <= hi; }
};

inline Interval symmetric_interval(double center, double halfwidth) {
    return Interval{center - halfwidth, center + halfwidth};
}

/// Secured, estimated and potential relevance: the lower CI bound, estimate and
/// upper CI bound of an effect, each divided by the threshold zeta.
struct RelevanceTriple {
    double rls = 0.0;
    double rle = 0.0;
    double rlp = 0.0;
    double zeta = kDefaultZeta;
};

RelevanceTriple relevance_triple(double eff, double halfwidth, double zeta);

/// Six-way interval classification.
enum class EffectLabel { Rlv, Ngl, NglSig, Ctr, Amb, AmbSig };

/// Five-way label used for the rows of the replication outcome table.
enum class RowLabel { Rlv, Sig, Amb, Ngl, Ctr };

struct EffectClass {
    EffectLabel label = EffectLabel::Amb;

    RowLabel row() const;
    /// Label with the ".Sig" refinement dropped (Ngl.Sig -> Ngl, Amb.Sig -> Amb).
    EffectLabel base() const;

    friend bool operator==(const EffectClass&, const EffectClass&) = default;
};

std::string_view to_string(EffectLabel label);
std::string_view to_string(RowLabel label);
EffectLabel parse_effect_label(std::string_view label);
RowLabel parse_row_label(std::string_view label);

/// Precedence: Rlv (rls >= 1), Ctr (rlp < 0), Ngl (rlp < 1), otherwise Amb.
/// Ngl and Amb gain the ".Sig" refinement when rls > 0.
EffectClass classify_effect(const RelevanceTriple& triple);

} // namespace relrep
