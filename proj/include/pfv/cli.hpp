#pragma once

#include "claims.hpp"
#include "llm_bridge.hpp"
#include "measurement.hpp"
#include "verifier.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

namespace pfv::cli
{

/* Exit-code contract:
 *   0  success / VALIDATED / bound confirmed
 *   1  REFUTED
 *   2  bad input (family string, claim file, arguments)
 *   3  INCONCLUSIVE or truncated measurement
 *   4  completion contained no claim block
 *   5  provider error / missing credential
 * Every command ends with a machine-parseable "status=<WORD>" line. */
enum ExitCode
{
  exit_ok = 0,
  exit_refuted = 1,
  exit_bad_input = 2,
  exit_inconclusive = 3,
  exit_no_claim = 4,
  exit_provider = 5
};

struct Options
{
  GrowthConfig growth{};
  MeasureConfig measure{};
  std::ostream* out = &std::cout;
  std::ostream* err = &std::cerr;
};

namespace detail
{

inline int finish( Options const& opt, int code, std::string const& status )
{
  *opt.out << "status=" << status << "\n";
  return code;
}

inline bool write_file( Options const& opt, std::string const& path, std::string const& content )
{
  std::ofstream f( path, std::ios::binary );
  if ( !f )
  {
    *opt.err << "cannot write " << path << "\n";
    return false;
  }
  f << content;
  return true;
}

inline std::string read_file( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw ConfigError( "cannot read " + path );
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string format_series( SizeSeries const& series, std::string const& format )
{
  if ( format == "json" )
  {
    nlohmann::json points = nlohmann::json::array();
    for ( auto const& p : series.points )
      points.push_back( { { "n", p.n }, { "count", p.count }, { "profile", p.profile.counts } } );
    nlohmann::json doc{ { "family", format_family( series.tmpl ) },
                        { "points", points },
                        { "source", series.source == SeriesSource::ENGINE ? "ENGINE" : "ORACLE" },
                        { "truncated", series.truncated } };
    return doc.dump( 2 );
  }
  return series_to_csv( series );
}

} // namespace detail

inline int run_measure( std::string const& family, long n_from, long n_to,
                        std::string const& out_path, std::string const& format,
                        Options const& opt = {} )
{
  FamilyTemplate tmpl;
  try
  {
    tmpl = parse_family( family ).tmpl;
  }
  catch ( std::exception const& e )
  {
    *opt.err << e.what() << "\n";
    return detail::finish( opt, exit_bad_input, "ERROR" );
  }
  SizeSeries series;
  try
  {
    series = measure_series( tmpl, n_from, n_to, opt.measure );
  }
  catch ( std::exception const& e )
  {
    *opt.err << e.what() << "\n";
    return detail::finish( opt, exit_bad_input, "ERROR" );
  }
  std::string text = detail::format_series( series, format );
  if ( out_path.empty() )
    *opt.out << text;
  else if ( !detail::write_file( opt, out_path, text ) )
    return detail::finish( opt, exit_bad_input, "ERROR" );
  if ( series.truncated )
    return detail::finish( opt, exit_inconclusive, "TRUNCATED" );
  return detail::finish( opt, exit_ok, "OK" );
}

/* Checks a single polynomial bound expression against a measured series. */
inline int run_check( std::string const& family, long n_from, long n_to,
                      std::string const& bound_text, long long scale_denominator,
                      std::string const& out_path, Options const& opt = {} )
{
  FamilyTemplate tmpl;
  BoundExpr bound;
  try
  {
    tmpl = parse_family( family ).tmpl;
    bound = BoundExpr::parse( bound_text );
  }
  catch ( std::exception const& e )
  {
    *opt.err << e.what() << "\n";
    return detail::finish( opt, exit_bad_input, "ERROR" );
  }
  SizeSeries series;
  try
  {
    series = measure_series( tmpl, n_from, n_to, opt.measure );
  }
  catch ( std::exception const& e )
  {
    *opt.err << e.what() << "\n";
    return detail::finish( opt, exit_bad_input, "ERROR" );
  }

  ProofClaim probe;
  probe.family = tmpl;
  probe.family_text = family;
  probe.base_n = n_from;
  probe.bound = bound;
  probe.step_delta = BoundExpr::parse( "0" );
  probe.bound_scale_denominator = scale_denominator;
  AspectVerdict verdict = check_bound( probe, series );

  std::ostringstream msg;
  switch ( verdict.status )
  {
  case AspectVerdict::Status::CONFIRMED_UP_TO:
    msg << "bound " << bound_text << " confirmed up to n=" << verdict.n_max << "\n";
    break;
  case AspectVerdict::Status::REFUTED:
    msg << "bound " << bound_text << " refuted at n=" << verdict.witness_n << ": bound "
        << verdict.claimed << ", measured " << verdict.measured << "\n";
    break;
  case AspectVerdict::Status::INCONCLUSIVE:
    msg << "bound check inconclusive: " << verdict.reason << "\n";
    break;
  }
  if ( out_path.empty() )
    *opt.out << msg.str();
  else if ( !detail::write_file( opt, out_path, msg.str() ) )
    return detail::finish( opt, exit_bad_input, "ERROR" );

  if ( verdict.status == AspectVerdict::Status::REFUTED )
    return detail::finish( opt, exit_refuted, "REFUTED" );
  if ( verdict.status == AspectVerdict::Status::INCONCLUSIVE )
    return detail::finish( opt, exit_inconclusive, "INCONCLUSIVE" );
  return detail::finish( opt, exit_ok, "CONFIRMED" );
}

namespace detail
{

inline int emit_report( Options const& opt, VerificationReport const& report,
                        std::string const& out_path )
{
  std::string report_json = serialize_report( report );
  std::string proof = render_proof( report.claim, report );
  if ( out_path.empty() )
  {
    *opt.out << report_json << "\n" << proof;
  }
  else
  {
    if ( !write_file( opt, out_path + ".report.json", report_json ) ||
         !write_file( opt, out_path + ".proof.md", proof ) )
      return -1;
  }
  return 0;
}

inline int verdict_exit( Options const& opt, VerificationReport const& report )
{
  switch ( report.overall )
  {
  case VerificationReport::Overall::VALIDATED: return finish( opt, exit_ok, "VALIDATED" );
  case VerificationReport::Overall::REFUTED: return finish( opt, exit_refuted, "REFUTED" );
  default: return finish( opt, exit_inconclusive, "INCONCLUSIVE" );
  }
}

} // namespace detail

inline int run_verify( std::string const& claim_path, long n_to, std::string const& out_path,
                       Options const& opt = {} )
{
  ProofClaim claim;
  try
  {
    claim = parse_claim( detail::read_file( claim_path ) );
  }
  catch ( std::exception const& e )
  {
    *opt.err << e.what() << "\n";
    return detail::finish( opt, exit_bad_input, "ERROR" );
  }
  VerificationReport report;
  try
  {
    report = verify( claim, n_to, { opt.growth, opt.measure } );
  }
  catch ( std::exception const& e )
  {
    *opt.err << e.what() << "\n";
    return detail::finish( opt, exit_bad_input, "ERROR" );
  }
  if ( detail::emit_report( opt, report, out_path ) != 0 )
    return detail::finish( opt, exit_bad_input, "ERROR" );
  return detail::verdict_exit( opt, report );
}

inline int run_sketch( std::string const& family, std::string const& provider, long n_to,
                       std::string const& out_path, Options const& opt = {} )
{
  FamilyTemplate tmpl;
  ProviderConfig cfg;
  try
  {
    tmpl = parse_family( family ).tmpl;
    cfg = parse_provider( provider );
  }
  catch ( FamilySyntaxError const& e )
  {
    *opt.err << e.what() << "\n";
    return detail::finish( opt, exit_bad_input, "ERROR" );
  }
  catch ( ConfigError const& e )
  {
    *opt.err << e.what() << "\n";
    return detail::finish( opt, exit_provider, "PROVIDER_ERROR" );
  }

  SketchResult sketch;
  try
  {
    sketch = request_sketch( cfg, build_prompt( tmpl ) );
  }
  catch ( std::exception const& e )
  {
    *opt.err << e.what() << "\n";
    return detail::finish( opt, exit_provider, "PROVIDER_ERROR" );
  }

  if ( !out_path.empty() &&
       !detail::write_file( opt, out_path + ".raw.txt", sketch.raw ) )
    return detail::finish( opt, exit_bad_input, "ERROR" );

  if ( !sketch.claim )
  {
    *opt.err << "no claim extracted: " << sketch.diagnostics << "\n";
    return detail::finish( opt, exit_no_claim, "NO_CLAIM" );
  }

  VerificationReport report = verify( *sketch.claim, n_to, { opt.growth, opt.measure } );
  if ( detail::emit_report( opt, report, out_path ) != 0 )
    return detail::finish( opt, exit_bad_input, "ERROR" );
  return detail::verdict_exit( opt, report );
}

/* Re-renders the proof text from an existing report file without
 * re-measuring. */
inline int run_report( std::string const& report_path, std::string const& out_path,
                       Options const& opt = {} )
{
  VerificationReport report;
  try
  {
    report = parse_report( detail::read_file( report_path ) );
  }
  catch ( std::exception const& e )
  {
    *opt.err << e.what() << "\n";
    return detail::finish( opt, exit_bad_input, "ERROR" );
  }
  std::string proof = render_proof( report.claim, report );
  if ( out_path.empty() )
    *opt.out << proof;
  else if ( !detail::write_file( opt, out_path, proof ) )
    return detail::finish( opt, exit_bad_input, "ERROR" );
  return detail::finish( opt, exit_ok, "OK" );
}

} // namespace pfv::cli
