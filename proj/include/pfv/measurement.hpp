#pragma once

#include "bdd.hpp"
#include "errors.hpp"
#include "families.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace pfv
{

enum class SeriesSource
{
  ENGINE,
  ORACLE
};

struct SeriesPoint
{
  long n;
  std::size_t count;
  LevelProfile profile;

  bool operator==( SeriesPoint const& ) const = default;
};

struct SizeSeries
{
  FamilyTemplate tmpl;
  std::vector<SeriesPoint> points;
  SeriesSource source = SeriesSource::ENGINE;
  bool truncated = false;
  long truncated_at = 0; // first n that exceeded the budget

  bool operator==( SizeSeries const& ) const = default;
};

struct MeasureConfig
{
  std::size_t node_cap = 5'000'000;
};

/* One fresh manager per point; a point that blows the node cap truncates the
 * series explicitly instead of being dropped silently. */
inline SizeSeries measure_series( FamilyTemplate const& tmpl, long n_from, long n_to,
                                  MeasureConfig const& cfg = {} )
{
  if ( n_from < 1 || n_to < n_from )
    throw InsufficientData( "invalid parameter range" );
  SizeSeries series;
  series.tmpl = tmpl;
  series.source = SeriesSource::ENGINE;
  for ( long n = n_from; n <= n_to; ++n )
  {
    FamilySpec spec = at_parameter( tmpl, n );
    try
    {
      BddManager mgr( resolve_order( spec ), cfg.node_cap );
      NodeRef root = build( spec, mgr );
      series.points.push_back( { n, mgr.internal_node_count( root ), mgr.level_profile( root ) } );
    }
    catch ( NodeBudgetError const& )
    {
      series.truncated = true;
      series.truncated_at = n;
      break;
    }
  }
  return series;
}

/* Independent ground truth: counts, per level, the distinct subfunctions
 * obtained by restricting all earlier ordered variables that still depend on
 * the level's variable.  Works on raw truth tables and never calls the BDD
 * engine. */
inline std::pair<std::size_t, LevelProfile> oracle_size( FamilySpec const& spec )
{
  long const v = variable_count( spec );
  if ( v > 20 )
    throw OracleCapacityError( "oracle is limited to 20 variables, got " + std::to_string( v ) );

  VarOrder order = resolve_order( spec );
  std::size_t const table_size = std::size_t{ 1 } << v;
  std::vector<std::uint8_t> table( table_size );

  // index bit layout: ordered variable at level L occupies bit (v-1-L)
  std::vector<std::uint8_t> assignment( static_cast<std::size_t>( v ) + 1 );
  for ( std::size_t idx = 0; idx < table_size; ++idx )
  {
    for ( long level = 0; level < v; ++level )
    {
      int var = order.variable_at( static_cast<int>( level ) );
      assignment[static_cast<std::size_t>( var )] =
          ( idx >> ( v - 1 - level ) ) & 1u ? 1 : 0;
    }
    table[idx] = eval_spec( spec, assignment ) ? 1 : 0;
  }

  LevelProfile profile;
  profile.counts.assign( static_cast<std::size_t>( v ), 0 );
  for ( long level = 0; level < v; ++level )
  {
    std::size_t const block = std::size_t{ 1 } << ( v - level );
    std::size_t const half = block / 2;
    std::unordered_set<std::string_view> seen;
    for ( std::size_t start = 0; start < table_size; start += block )
    {
      char const* data = reinterpret_cast<char const*>( table.data() ) + start;
      // essential dependence on the level variable: the two halves differ
      if ( std::string_view( data, half ) != std::string_view( data + half, half ) )
        seen.insert( std::string_view( data, block ) );
    }
    profile.counts[static_cast<std::size_t>( level )] = seen.size();
  }
  return { profile.total(), profile };
}

inline SizeSeries oracle_series( FamilyTemplate const& tmpl, long n_from, long n_to )
{
  SizeSeries series;
  series.tmpl = tmpl;
  series.source = SeriesSource::ORACLE;
  for ( long n = n_from; n <= n_to; ++n )
  {
    auto [count, profile] = oracle_size( at_parameter( tmpl, n ) );
    series.points.push_back( { n, count, profile } );
  }
  return series;
}

enum class GrowthClass
{
  LINEAR,
  POLYNOMIAL,
  EXPONENTIAL,
  INCONCLUSIVE
};

struct GrowthVerdict
{
  GrowthClass cls = GrowthClass::INCONCLUSIVE;
  int degree = 0;          // for LINEAR / POLYNOMIAL
  double dominating_c = 0; // smallest c with count <= c * n^degree on all points
  double fitted_exponent = 0;
  double min_window_ratio = 0;
  int window = 0;
  std::string note;
};

struct GrowthConfig
{
  double ratio_threshold = 1.5;
  double c_max = 64.0;
  int max_degree = 4;
};

/* Exponential when every trailing-window successive ratio clears the
 * threshold; otherwise the degree comes from a log-log least-squares slope,
 * with the dominating constant capped at c_max. */
inline GrowthVerdict classify_growth( SizeSeries const& series, GrowthConfig const& cfg = {} )
{
  auto const& pts = series.points;
  if ( pts.size() < 4 )
    throw InsufficientData( "growth classification needs at least 4 points" );

  GrowthVerdict verdict;

  std::size_t const num_ratios = pts.size() - 1;
  std::size_t window = std::max<std::size_t>( 3, ( pts.size() + 1 ) / 2 );
  window = std::min( window, num_ratios );
  verdict.window = static_cast<int>( window );

  bool exponential = true;
  double min_ratio = std::numeric_limits<double>::infinity();
  for ( std::size_t i = num_ratios - window; i < num_ratios; ++i )
  {
    if ( pts[i].count == 0 )
    {
      exponential = false;
      break;
    }
    double ratio = static_cast<double>( pts[i + 1].count ) / static_cast<double>( pts[i].count );
    min_ratio = std::min( min_ratio, ratio );
    if ( !( ratio > cfg.ratio_threshold ) )
      exponential = false;
  }
  verdict.min_window_ratio = std::isfinite( min_ratio ) ? min_ratio : 0.0;
  if ( exponential )
  {
    verdict.cls = GrowthClass::EXPONENTIAL;
    return verdict;
  }

  // log-log slope over points with positive count
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for ( auto const& p : pts )
  {
    if ( p.count == 0 )
      continue;
    double x = std::log( static_cast<double>( p.n ) );
    double y = std::log( static_cast<double>( p.count ) );
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++m;
  }
  if ( m < 2 )
  {
    verdict.cls = GrowthClass::INCONCLUSIVE;
    verdict.note = "too few non-zero points";
    return verdict;
  }
  double denom = static_cast<double>( m ) * sxx - sx * sx;
  double slope = denom != 0.0 ? ( static_cast<double>( m ) * sxy - sx * sy ) / denom : 0.0;
  verdict.fitted_exponent = slope;

  int degree = static_cast<int>( std::lround( slope ) );
  degree = std::max( degree, 0 );
  if ( degree > cfg.max_degree )
  {
    verdict.cls = GrowthClass::INCONCLUSIVE;
    verdict.note = "fitted exponent " + std::to_string( slope ) + " exceeds max degree";
    return verdict;
  }

  double c_dom = 0;
  for ( auto const& p : pts )
    c_dom = std::max( c_dom, static_cast<double>( p.count ) /
                                 std::pow( static_cast<double>( p.n ), degree ) );
  verdict.dominating_c = c_dom;
  if ( c_dom > cfg.c_max )
  {
    verdict.cls = GrowthClass::INCONCLUSIVE;
    verdict.note = "dominating constant " + std::to_string( c_dom ) + " exceeds c_max";
    return verdict;
  }
  verdict.degree = degree;
  verdict.cls = degree == 1 ? GrowthClass::LINEAR : GrowthClass::POLYNOMIAL;
  return verdict;
}

struct BoundCheck
{
  bool confirmed = false;
  long confirmed_up_to = 0; // when confirmed
  long witness_n = 0;       // first violating point otherwise
  std::size_t measured = 0;

  bool operator==( BoundCheck const& ) const = default;
};

/* count(n) <= (c_num/c_den) * n^d on every point, in exact integer
 * arithmetic. */
inline BoundCheck check_poly_bound( SizeSeries const& series, long long c_num, long long c_den,
                                    int d )
{
  if ( c_den <= 0 )
    throw InsufficientData( "bound denominator must be positive" );
  BoundCheck result;
  for ( auto const& p : series.points )
  {
    // count * c_den <= c_num * n^d, saturated at 128 bits
    unsigned __int128 lhs = static_cast<unsigned __int128>( p.count ) *
                            static_cast<unsigned __int128>( c_den );
    unsigned __int128 rhs = c_num < 0 ? 0 : static_cast<unsigned __int128>( c_num );
    bool overflow = false;
    for ( int i = 0; i < d; ++i )
    {
      unsigned __int128 next = rhs * static_cast<unsigned __int128>( p.n );
      if ( p.n != 0 && next / static_cast<unsigned __int128>( p.n ) != rhs )
      {
        overflow = true; // bound exceeds anything measurable
        break;
      }
      rhs = next;
    }
    if ( !overflow && lhs > rhs )
    {
      result.confirmed = false;
      result.witness_n = p.n;
      result.measured = p.count;
      return result;
    }
    result.confirmed_up_to = p.n;
  }
  result.confirmed = true;
  return result;
}

inline std::string series_to_csv( SizeSeries const& series )
{
  std::ostringstream out;
  out << "n,count,profile,source\n";
  char const* source = series.source == SeriesSource::ENGINE ? "ENGINE" : "ORACLE";
  for ( auto const& p : series.points )
  {
    out << p.n << ',' << p.count << ',';
    for ( std::size_t i = 0; i < p.profile.counts.size(); ++i )
    {
      if ( i )
        out << ';';
      out << p.profile.counts[i];
    }
    out << ',' << source << '\n';
  }
  if ( series.truncated )
    out << "# truncated at n=" << series.truncated_at << '\n';
  return out.str();
}

} // namespace pfv
