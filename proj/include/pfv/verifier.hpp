#pragma once

#include "claims.hpp"
#include "measurement.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace pfv
{

enum class Aspect
{
  BOUND,
  BASE_CASE,
  STEP_RECURRENCE,
  GROWTH_CLASS,
  LEVEL_PATTERN
};

inline std::string aspect_name( Aspect a )
{
  switch ( a )
  {
  case Aspect::BOUND: return "BOUND";
  case Aspect::BASE_CASE: return "BASE_CASE";
  case Aspect::STEP_RECURRENCE: return "STEP_RECURRENCE";
  case Aspect::GROWTH_CLASS: return "GROWTH_CLASS";
  case Aspect::LEVEL_PATTERN: return "LEVEL_PATTERN";
  }
  return "?";
}

struct AspectVerdict
{
  enum class Status
  {
    CONFIRMED_UP_TO,
    REFUTED,
    INCONCLUSIVE
  };

  Aspect aspect = Aspect::BOUND;
  Status status = Status::INCONCLUSIVE;
  long n_max = 0;           // CONFIRMED_UP_TO: largest checked n
  long witness_n = 0;       // REFUTED
  long long claimed = 0;    // REFUTED
  long long measured = 0;   // REFUTED
  std::string reason;       // INCONCLUSIVE

  static AspectVerdict confirmed( Aspect a, long n_max )
  {
    AspectVerdict v;
    v.aspect = a;
    v.status = Status::CONFIRMED_UP_TO;
    v.n_max = n_max;
    return v;
  }

  static AspectVerdict refuted( Aspect a, long n, long long claimed, long long measured )
  {
    AspectVerdict v;
    v.aspect = a;
    v.status = Status::REFUTED;
    v.witness_n = n;
    v.claimed = claimed;
    v.measured = measured;
    return v;
  }

  static AspectVerdict inconclusive( Aspect a, std::string reason )
  {
    AspectVerdict v;
    v.aspect = a;
    v.status = Status::INCONCLUSIVE;
    v.reason = std::move( reason );
    return v;
  }

  bool operator==( AspectVerdict const& ) const = default;
};

struct VerificationReport
{
  enum class Overall
  {
    VALIDATED,
    REFUTED,
    INCONCLUSIVE
  };

  ProofClaim claim;
  SizeSeries series;
  std::vector<AspectVerdict> verdicts;
  Overall overall = Overall::INCONCLUSIVE;

  AspectVerdict const& verdict( Aspect a ) const
  {
    for ( auto const& v : verdicts )
      if ( v.aspect == a )
        return v;
    throw ReportMismatch( "aspect missing from report" );
  }
};

struct PatternReport
{
  long stabilized_at = 0;
  std::vector<long long> delta_pattern; // leading zeros trimmed
  int period = 0;                       // 1 or 2 when stable
  bool stable = false;
  bool truncated = false;
};

inline AspectVerdict check_base_case( ProofClaim const& claim, SizeSeries const& series )
{
  for ( auto const& p : series.points )
  {
    if ( p.n == claim.base_n )
    {
      if ( static_cast<long long>( p.count ) == claim.base_size )
        return AspectVerdict::confirmed( Aspect::BASE_CASE, claim.base_n );
      return AspectVerdict::refuted( Aspect::BASE_CASE, claim.base_n, claim.base_size,
                                     static_cast<long long>( p.count ) );
    }
  }
  return AspectVerdict::inconclusive( Aspect::BASE_CASE, "base point not measured" );
}

inline AspectVerdict check_recurrence( ProofClaim const& claim, SizeSeries const& series )
{
  long checked_up_to = 0;
  bool any_pair = false;
  for ( std::size_t i = 0; i + 1 < series.points.size(); ++i )
  {
    auto const& a = series.points[i];
    auto const& b = series.points[i + 1];
    if ( a.n < claim.base_n )
      continue;
    if ( b.n != a.n + 1 )
      return AspectVerdict::inconclusive( Aspect::STEP_RECURRENCE,
                                          "gap in series after n=" + std::to_string( a.n ) );
    any_pair = true;
    long long measured = static_cast<long long>( b.count ) - static_cast<long long>( a.count );
    long long expected;
    try
    {
      expected = claim.step_delta.evaluate( b.n );
    }
    catch ( NegativeBound const& )
    {
      return AspectVerdict::inconclusive( Aspect::STEP_RECURRENCE,
                                          "step delta negative at n=" + std::to_string( b.n ) );
    }
    catch ( EvalOverflow const& )
    {
      return AspectVerdict::inconclusive( Aspect::STEP_RECURRENCE,
                                          "step delta overflows at n=" + std::to_string( b.n ) );
    }
    if ( measured != expected )
      return AspectVerdict::refuted( Aspect::STEP_RECURRENCE, b.n, expected, measured );
    checked_up_to = b.n;
  }
  if ( !any_pair )
    return AspectVerdict::inconclusive( Aspect::STEP_RECURRENCE,
                                        "fewer than two consecutive points" );
  return AspectVerdict::confirmed( Aspect::STEP_RECURRENCE, checked_up_to );
}

inline AspectVerdict check_bound( ProofClaim const& claim, SizeSeries const& series )
{
  if ( series.points.empty() )
    return AspectVerdict::inconclusive( Aspect::BOUND, "empty series" );
  long n_max = 0;
  for ( auto const& p : series.points )
  {
    long long bound_value;
    try
    {
      bound_value = claim.bound.evaluate( p.n );
    }
    catch ( EvalOverflow const& )
    {
      // the bound exceeds any measurable size at this point
      n_max = p.n;
      continue;
    }
    catch ( NegativeBound const& )
    {
      return AspectVerdict::inconclusive( Aspect::BOUND,
                                          "bound negative at n=" + std::to_string( p.n ) );
    }
    __int128 lhs = static_cast<__int128>( p.count ) * claim.bound_scale_denominator;
    if ( lhs > static_cast<__int128>( bound_value ) )
      return AspectVerdict::refuted( Aspect::BOUND, p.n, bound_value,
                                     static_cast<long long>( p.count ) *
                                         claim.bound_scale_denominator );
    n_max = p.n;
  }
  return AspectVerdict::confirmed( Aspect::BOUND, n_max );
}

struct VerifyConfig
{
  GrowthConfig growth{};
  MeasureConfig measure{};
};

inline AspectVerdict check_growth_class( ProofClaim const& claim, SizeSeries const& series,
                                         GrowthConfig const& cfg = {} )
{
  GrowthVerdict verdict;
  try
  {
    verdict = classify_growth( series, cfg );
  }
  catch ( InsufficientData const& e )
  {
    return AspectVerdict::inconclusive( Aspect::GROWTH_CLASS, e.what() );
  }
  if ( verdict.cls == GrowthClass::INCONCLUSIVE )
    return AspectVerdict::inconclusive( Aspect::GROWTH_CLASS, verdict.note );

  long n_max = series.points.back().n;
  bool compatible = false;
  switch ( claim.growth.kind )
  {
  case GrowthClaim::Kind::EXPONENTIAL:
    compatible = verdict.cls == GrowthClass::EXPONENTIAL;
    break;
  case GrowthClaim::Kind::LINEAR:
    compatible = verdict.cls == GrowthClass::LINEAR ||
                 ( verdict.cls == GrowthClass::POLYNOMIAL && verdict.degree <= 1 );
    break;
  case GrowthClaim::Kind::POLYNOMIAL:
    compatible = ( verdict.cls == GrowthClass::LINEAR && claim.growth.degree >= 1 ) ||
                 ( verdict.cls == GrowthClass::POLYNOMIAL &&
                   verdict.degree <= claim.growth.degree );
    break;
  }
  if ( compatible )
    return AspectVerdict::confirmed( Aspect::GROWTH_CLASS, n_max );

  long long claimed_degree =
      claim.growth.kind == GrowthClaim::Kind::EXPONENTIAL ? -1 : claim.growth.degree;
  long long measured_degree = verdict.cls == GrowthClass::EXPONENTIAL ? -1 : verdict.degree;
  return AspectVerdict::refuted( Aspect::GROWTH_CLASS, n_max, claimed_degree, measured_degree );
}

namespace detail
{

/* Per-variable node counts so profiles of consecutive instances can be
 * aligned by variable identity when the preset interleaves new variables. */
inline std::map<int, long long> profile_by_variable( FamilySpec const& spec,
                                                     LevelProfile const& profile )
{
  VarOrder order = resolve_order( spec );
  std::map<int, long long> by_var;
  for ( std::size_t level = 0; level < profile.counts.size(); ++level )
    by_var[order.variable_at( static_cast<int>( level ) )] =
        static_cast<long long>( profile.counts[level] );
  return by_var;
}

inline std::vector<long long> trim_leading_zeros( std::vector<long long> v )
{
  std::size_t i = 0;
  while ( i < v.size() && v[i] == 0 )
    ++i;
  v.erase( v.begin(), v.begin() + static_cast<std::ptrdiff_t>( i ) );
  return v;
}

} // namespace detail

/* Aligns consecutive level profiles and reports the stabilized per-step
 * delta pattern, if any.  A simplified regularity check standing in for
 * graph-pattern proof search; stability (with period 1 or 2 for rules that
 * change on every other step) is inductive evidence, not a proof. */
inline PatternReport check_level_pattern( FamilyTemplate const& tmpl, long n_from, long n_to,
                                          MeasureConfig const& cfg = {} )
{
  if ( n_to < n_from + 2 )
    throw InsufficientData( "pattern check needs at least three points" );

  PatternReport report;
  SizeSeries series = measure_series( tmpl, n_from, n_to, cfg );
  report.truncated = series.truncated;
  if ( series.points.size() < 3 )
  {
    report.stable = false;
    return report;
  }

  std::vector<std::vector<long long>> deltas;
  for ( std::size_t i = 0; i + 1 < series.points.size(); ++i )
  {
    FamilySpec cur = at_parameter( tmpl, series.points[i].n );
    FamilySpec nxt = at_parameter( tmpl, series.points[i + 1].n );
    auto prev_by_var = detail::profile_by_variable( cur, series.points[i].profile );
    auto next_by_var = detail::profile_by_variable( nxt, series.points[i + 1].profile );
    VarOrder next_order = resolve_order( nxt );
    std::vector<long long> delta;
    delta.reserve( next_by_var.size() );
    for ( int level = 0; level < next_order.num_vars(); ++level )
    {
      int var = next_order.variable_at( level );
      long long before = prev_by_var.count( var ) ? prev_by_var[var] : 0;
      delta.push_back( next_by_var[var] - before );
    }
    deltas.push_back( detail::trim_leading_zeros( std::move( delta ) ) );
  }

  for ( int period = 1; period <= 2; ++period )
  {
    if ( static_cast<int>( deltas.size() ) < period + 1 )
      continue;
    // smallest start from which the pattern repeats with this period
    std::size_t start = deltas.size();
    for ( std::size_t s = 0; s + static_cast<std::size_t>( period ) < deltas.size(); ++s )
    {
      bool ok = true;
      for ( std::size_t i = s; i + static_cast<std::size_t>( period ) < deltas.size(); ++i )
        ok = ok && deltas[i] == deltas[i + static_cast<std::size_t>( period )];
      if ( ok )
      {
        start = s;
        break;
      }
    }
    if ( start < deltas.size() )
    {
      report.stable = !report.truncated;
      report.period = period;
      report.stabilized_at = n_from + static_cast<long>( start );
      report.delta_pattern = deltas[start];
      return report;
    }
  }
  report.stable = false;
  return report;
}

inline VerificationReport verify( ProofClaim const& claim, long n_to,
                                  VerifyConfig const& cfg = {} )
{
  VerificationReport report;
  report.claim = claim;
  report.series = measure_series( claim.family, claim.base_n, n_to, cfg.measure );

  report.verdicts.push_back( check_base_case( claim, report.series ) );
  report.verdicts.push_back( check_recurrence( claim, report.series ) );
  report.verdicts.push_back( check_bound( claim, report.series ) );
  report.verdicts.push_back( check_growth_class( claim, report.series, cfg.growth ) );

  if ( n_to >= claim.base_n + 2 )
  {
    PatternReport pattern = check_level_pattern( claim.family, claim.base_n, n_to, cfg.measure );
    if ( pattern.stable )
    {
      auto v = AspectVerdict::confirmed( Aspect::LEVEL_PATTERN, n_to );
      report.verdicts.push_back( v );
    }
    else
    {
      report.verdicts.push_back(
          AspectVerdict::inconclusive( Aspect::LEVEL_PATTERN, "per-step delta pattern did not stabilize" ) );
    }
  }
  else
  {
    report.verdicts.push_back(
        AspectVerdict::inconclusive( Aspect::LEVEL_PATTERN, "range too short for pattern check" ) );
  }

  bool any_refuted = false;
  for ( auto const& v : report.verdicts )
    any_refuted = any_refuted || v.status == AspectVerdict::Status::REFUTED;
  bool core_confirmed =
      report.verdict( Aspect::BOUND ).status == AspectVerdict::Status::CONFIRMED_UP_TO &&
      report.verdict( Aspect::GROWTH_CLASS ).status == AspectVerdict::Status::CONFIRMED_UP_TO;

  if ( any_refuted )
    report.overall = VerificationReport::Overall::REFUTED;
  else if ( core_confirmed )
    report.overall = VerificationReport::Overall::VALIDATED;
  else
    report.overall = VerificationReport::Overall::INCONCLUSIVE;
  return report;
}

// --------------------------------------------------------------------------
// report serialization
// --------------------------------------------------------------------------

inline std::string overall_name( VerificationReport::Overall o )
{
  switch ( o )
  {
  case VerificationReport::Overall::VALIDATED: return "VALIDATED";
  case VerificationReport::Overall::REFUTED: return "REFUTED";
  case VerificationReport::Overall::INCONCLUSIVE: return "INCONCLUSIVE";
  }
  return "?";
}

inline std::string serialize_report( VerificationReport const& report )
{
  nlohmann::json doc;
  doc["claim"] = nlohmann::json::parse( serialize_claim( report.claim ) );
  doc["overall"] = overall_name( report.overall );

  nlohmann::json verdicts = nlohmann::json::array();
  for ( auto const& v : report.verdicts )
  {
    nlohmann::json jv;
    jv["aspect"] = aspect_name( v.aspect );
    switch ( v.status )
    {
    case AspectVerdict::Status::CONFIRMED_UP_TO:
      jv["status"] = "CONFIRMED_UP_TO";
      jv["n_max"] = v.n_max;
      break;
    case AspectVerdict::Status::REFUTED:
      jv["status"] = "REFUTED";
      jv["n"] = v.witness_n;
      jv["claimed"] = v.claimed;
      jv["measured"] = v.measured;
      break;
    case AspectVerdict::Status::INCONCLUSIVE:
      jv["status"] = "INCONCLUSIVE";
      jv["reason"] = v.reason;
      break;
    }
    verdicts.push_back( jv );
  }
  doc["verdicts"] = verdicts;

  nlohmann::json points = nlohmann::json::array();
  for ( auto const& p : report.series.points )
  {
    nlohmann::json jp;
    jp["n"] = p.n;
    jp["count"] = p.count;
    jp["profile"] = p.profile.counts;
    points.push_back( jp );
  }
  doc["series"] = { { "points", points },
                    { "source", report.series.source == SeriesSource::ENGINE ? "ENGINE" : "ORACLE" },
                    { "truncated", report.series.truncated } };
  return doc.dump( 2 );
}

inline VerificationReport parse_report( std::string const& text )
{
  nlohmann::json doc;
  try
  {
    doc = nlohmann::json::parse( text );
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw ClaimFormatError( "report", e.what() );
  }
  VerificationReport report;
  report.claim = parse_claim( doc.at( "claim" ).dump() );
  std::string overall = doc.at( "overall" ).get<std::string>();
  report.overall = overall == "VALIDATED"   ? VerificationReport::Overall::VALIDATED
                   : overall == "REFUTED"   ? VerificationReport::Overall::REFUTED
                                            : VerificationReport::Overall::INCONCLUSIVE;

  for ( auto const& jv : doc.at( "verdicts" ) )
  {
    AspectVerdict v;
    std::string aspect = jv.at( "aspect" ).get<std::string>();
    for ( Aspect a : { Aspect::BOUND, Aspect::BASE_CASE, Aspect::STEP_RECURRENCE,
                       Aspect::GROWTH_CLASS, Aspect::LEVEL_PATTERN } )
      if ( aspect_name( a ) == aspect )
        v.aspect = a;
    std::string status = jv.at( "status" ).get<std::string>();
    if ( status == "CONFIRMED_UP_TO" )
    {
      v.status = AspectVerdict::Status::CONFIRMED_UP_TO;
      v.n_max = jv.at( "n_max" ).get<long>();
    }
    else if ( status == "REFUTED" )
    {
      v.status = AspectVerdict::Status::REFUTED;
      v.witness_n = jv.at( "n" ).get<long>();
      v.claimed = jv.at( "claimed" ).get<long long>();
      v.measured = jv.at( "measured" ).get<long long>();
    }
    else
    {
      v.status = AspectVerdict::Status::INCONCLUSIVE;
      v.reason = jv.value( "reason", "" );
    }
    report.verdicts.push_back( v );
  }

  report.claim.family_text = report.claim.family_text; // claim already parsed
  auto const& js = doc.at( "series" );
  report.series.tmpl = report.claim.family;
  report.series.source =
      js.at( "source" ).get<std::string>() == "ORACLE" ? SeriesSource::ORACLE : SeriesSource::ENGINE;
  report.series.truncated = js.value( "truncated", false );
  for ( auto const& jp : js.at( "points" ) )
  {
    SeriesPoint p;
    p.n = jp.at( "n" ).get<long>();
    p.count = jp.at( "count" ).get<std::size_t>();
    p.profile.counts = jp.at( "profile" ).get<std::vector<std::size_t>>();
    report.series.points.push_back( p );
  }
  return report;
}

// --------------------------------------------------------------------------
// human-readable proof rendering
// --------------------------------------------------------------------------

namespace detail
{

inline std::string verdict_sentence( AspectVerdict const& v, std::string const& param )
{
  std::ostringstream out;
  switch ( v.status )
  {
  case AspectVerdict::Status::CONFIRMED_UP_TO:
    out << "confirmed for all tested n ≤ " << v.n_max << ".";
    break;
  case AspectVerdict::Status::REFUTED:
    out << "claim stated " << v.claimed << ", measurement shows " << v.measured << " (at " << param
        << "=" << v.witness_n << ").";
    break;
  case AspectVerdict::Status::INCONCLUSIVE:
    out << "inconclusive: " << v.reason << ".";
    break;
  }
  return out.str();
}

} // namespace detail

/* Renders the induction-style proof document.  Refuted aspects are spelled
 * out next to the measured values; nothing is silently repaired. */
inline std::string render_proof( ProofClaim const& claim, VerificationReport const& report )
{
  if ( serialize_claim( report.claim ) != serialize_claim( claim ) )
    throw ReportMismatch( "report was produced for a different claim" );

  std::string const param = param_symbol( claim.family.family );
  std::ostringstream out;
  out << "# Inductive size analysis for " << claim.family_text << "\n\n";
  out << "_A claim is VALIDATED when no aspect is refuted and both the size bound and the "
         "growth class are confirmed on the measured range; confirmation never extends beyond "
         "the largest tested parameter._\n\n";
  out << "**Overall verdict: " << overall_name( report.overall ) << "**\n\n";

  auto const& base = report.verdict( Aspect::BASE_CASE );
  out << "## Base Case\n\n";
  out << "The claim states that at " << param << " = " << claim.base_n
      << " the BDD has " << claim.base_size << " internal nodes. ";
  if ( base.status == AspectVerdict::Status::REFUTED )
    out << "Measurement disagrees: claim stated " << base.claimed << ", measurement shows "
        << base.measured << ".";
  else if ( base.status == AspectVerdict::Status::CONFIRMED_UP_TO )
    out << "Measurement agrees.";
  else
    out << "Not checked: " << base.reason << ".";
  out << "\n\n";

  auto const& bound = report.verdict( Aspect::BOUND );
  out << "## Inductive Hypothesis\n\n";
  out << "Assume the BDD for parameter " << param << " has at most " << claim.bound.text();
  if ( claim.bound_scale_denominator != 1 )
    out << " / " << claim.bound_scale_denominator;
  out << " internal nodes. ";
  if ( bound.status == AspectVerdict::Status::CONFIRMED_UP_TO )
    out << "The bound holds for all tested n ≤ " << bound.n_max << ".";
  else if ( bound.status == AspectVerdict::Status::REFUTED )
    out << "The bound fails: claim stated at most " << bound.claimed
        << " (scaled), measurement shows " << bound.measured << " at " << param << "="
        << bound.witness_n << ".";
  else
    out << "Bound check inconclusive: " << bound.reason << ".";
  out << "\n\n";

  auto const& step = report.verdict( Aspect::STEP_RECURRENCE );
  auto const& pattern = report.verdict( Aspect::LEVEL_PATTERN );
  out << "## Inductive Step\n\n";
  out << "The claim states that moving from " << param << " to " << param
      << "+1 adds " << claim.step_delta.text() << " internal nodes. ";
  if ( step.status == AspectVerdict::Status::CONFIRMED_UP_TO )
    out << "The measured per-step increments match, " << detail::verdict_sentence( step, param );
  else if ( step.status == AspectVerdict::Status::REFUTED )
    out << "The measured increments disagree: " << detail::verdict_sentence( step, param );
  else
    out << "Recurrence check inconclusive: " << step.reason << ".";
  out << "\n\n";
  out << "Level-profile regularity: ";
  if ( pattern.status == AspectVerdict::Status::CONFIRMED_UP_TO )
    out << "the per-step level deltas stabilize, supporting the induction step structurally.";
  else
    out << pattern.reason << ".";
  out << "\n\n";

  auto const& growth = report.verdict( Aspect::GROWTH_CLASS );
  out << "## Conclusion\n\n";
  out << "Claimed growth class: " << claim.growth.to_string() << ". ";
  if ( growth.status == AspectVerdict::Status::CONFIRMED_UP_TO )
    out << "The measured series is compatible, " << detail::verdict_sentence( growth, param );
  else if ( growth.status == AspectVerdict::Status::REFUTED )
    out << "The measured series is incompatible with the claimed class.";
  else
    out << "Growth classification inconclusive: " << growth.reason << ".";
  out << "\n\n";
  out << "Measured sizes (" << param << ", internal nodes): ";
  for ( std::size_t i = 0; i < report.series.points.size(); ++i )
  {
    if ( i )
      out << ", ";
    out << "(" << report.series.points[i].n << ", " << report.series.points[i].count << ")";
  }
  out << "\n";

  if ( !claim.narrative.empty() )
  {
    out << "\n## Narrative\n\n";
    out << claim.narrative << "\n";
  }
  return out.str();
}

} // namespace pfv
