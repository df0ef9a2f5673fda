#include <pfv/cli.hpp>

#include <CLI11.hpp>

int main( int argc, char** argv )
{
  CLI::App app{ "BDD size measurement and inductive size-claim verification" };
  app.require_subcommand( 1 );

  std::string family, claim_path, report_path, provider, out_path, bound_text;
  std::string format = "csv";
  long n_from = 1, n_to = 12;
  long long scale_den = 1;
  pfv::cli::Options opt;

  auto add_tuning = [&]( CLI::App* cmd ) {
    cmd->add_option( "--ratio-threshold", opt.growth.ratio_threshold,
                     "exponential ratio threshold" );
    cmd->add_option( "--poly-cmax", opt.growth.c_max, "polynomial dominating-constant cap" );
    cmd->add_option( "--node-cap", opt.measure.node_cap, "per-point node budget" );
  };

  auto* measure = app.add_subcommand( "measure", "measure a size series" );
  measure->add_option( "--family", family, "family string, e.g. F2@k/NATURAL" )->required();
  measure->add_option( "--from", n_from, "first parameter value" )->required();
  measure->add_option( "--to", n_to, "last parameter value" )->required();
  measure->add_option( "--out", out_path, "output path (stdout if omitted)" );
  measure->add_option( "--format", format, "csv or json" )
      ->check( CLI::IsMember( { "csv", "json" } ) );
  add_tuning( measure );

  auto* check = app.add_subcommand( "check", "check a polynomial bound against measurements" );
  check->add_option( "--family", family )->required();
  check->add_option( "--from", n_from )->required();
  check->add_option( "--to", n_to )->required();
  check->add_option( "--bound", bound_text, "bound expression, e.g. 3*k+1" )->required();
  check->add_option( "--scale-den", scale_den, "bound denominator (1 or 2)" );
  check->add_option( "--out", out_path );
  add_tuning( check );

  auto* verify = app.add_subcommand( "verify", "verify a claim file" );
  verify->add_option( "--claim", claim_path, "claim JSON file" )->required();
  verify->add_option( "--to", n_to, "verify up to this parameter value" );
  verify->add_option( "--out", out_path, "output prefix for .report.json and .proof.md" );
  add_tuning( verify );

  auto* sketch = app.add_subcommand( "sketch", "obtain an LLM proof sketch and verify it" );
  sketch->add_option( "--family", family )->required();
  sketch->add_option( "--provider", provider, "mock:<dir> or http:<url>#<model>" )->required();
  sketch->add_option( "--to", n_to );
  sketch->add_option( "--out", out_path, "output prefix" );
  add_tuning( sketch );

  auto* report = app.add_subcommand( "report", "re-render the proof from an existing report" );
  report->add_option( "--report", report_path, "report JSON file" )->required();
  report->add_option( "--out", out_path );

  CLI11_PARSE( app, argc, argv );

  if ( measure->parsed() )
    return pfv::cli::run_measure( family, n_from, n_to, out_path, format, opt );
  if ( check->parsed() )
    return pfv::cli::run_check( family, n_from, n_to, bound_text, scale_den, out_path, opt );
  if ( verify->parsed() )
    return pfv::cli::run_verify( claim_path, n_to, out_path, opt );
  if ( sketch->parsed() )
    return pfv::cli::run_sketch( family, provider, n_to, out_path, opt );
  if ( report->parsed() )
    return pfv::cli::run_report( report_path, out_path, opt );
  return pfv::cli::exit_bad_input;
}
