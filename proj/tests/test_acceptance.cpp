#include <catch2/catch_amalgamated.hpp>

#include <pfv/cli.hpp>
#include <pfv/llm_bridge.hpp>
#include <pfv/measurement.hpp>
#include <pfv/verifier.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <sys/wait.h>

using namespace pfv;

namespace
{

/* Collects failures for one acceptance criterion and prints a single
 * machine-readable PASS/FAIL line. */
struct Criterion
{
  std::string title;
  std::vector<std::string> failures;

  explicit Criterion( std::string t ) : title( std::move( t ) ) {}

  void expect( bool cond, std::string const& msg )
  {
    if ( !cond )
      failures.push_back( msg );
  }

  bool finish() const
  {
    bool pass = failures.empty();
    std::cout << "[acceptance] " << title << ": " << ( pass ? "PASS" : "FAIL" ) << "\n";
    for ( auto const& f : failures )
      std::cout << "    - " << f << "\n";
    std::cout.flush();
    return pass;
  }
};

int run_cli( std::string const& args )
{
  std::string cmd = std::string( PFV_CLI_PATH ) + " " + args + " > /tmp/pfv_cli_stdout.txt 2>&1";
  int status = std::system( cmd.c_str() );
  return WIFEXITED( status ) ? WEXITSTATUS( status ) : -1;
}

std::string slurp( std::string const& path )
{
  std::ifstream in( path, std::ios::binary );
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string fixture_path( std::string const& name )
{
  return std::string( PFV_FIXTURE_DIR "/" ) + name;
}

} // namespace

TEST_CASE( "criterion 1: engine/oracle agreement" )
{
  Criterion c( "criterion 1 (engine/oracle agreement, <=16 vars, all presets)" );

  char const* family_bases[] = { "F2@k", "F3@k", "SYM_EXACTLY[k=HALF]@n",
                                 "SYM_THRESHOLD[k=HALF]@n", "PARITY@n", "ALL_AND@n",
                                 "ALL_OR@n", "MUL_BIT[m=n-1]@n" };
  char const* presets[] = { "/NATURAL", "/REVERSED", "/F2_SPLIT", "/MUL_BLOCKED",
                            "/MUL_INTERLEAVED" };
  std::size_t instances = 0;
  for ( auto const* base : family_bases )
  {
    for ( auto const* preset : presets )
    {
      FamilyTemplate tmpl = parse_family( std::string( base ) + preset ).tmpl;
      for ( long n = 1;; ++n )
      {
        FamilySpec spec = at_parameter( tmpl, n );
        if ( variable_count( spec ) > 16 )
          break;
        try
        {
          resolve_order( spec );
        }
        catch ( OrderError const& )
        {
          continue; // preset not applicable to this variable count
        }
        auto engine = measure_series( tmpl, n, n );
        auto [count, profile] = oracle_size( spec );
        c.expect( engine.points.size() == 1 && engine.points[0].count == count,
                  format_family( tmpl, &n ) + ": engine count != oracle count" );
        c.expect( !engine.points.empty() && engine.points[0].profile == profile,
                  format_family( tmpl, &n ) + ": engine profile != oracle profile" );
        ++instances;
      }
    }
  }
  c.expect( instances > 100, "unexpectedly few instances compared" );
  CHECK( c.finish() );
}

TEST_CASE( "criterion 2: f2 ordering dichotomy" )
{
  Criterion c( "criterion 2 (F2 dichotomy: 2k vs 2^(k+1)-2)" );

  auto natural = measure_series( parse_family( "F2@k/NATURAL" ).tmpl, 1, 64 );
  for ( auto const& p : natural.points )
    c.expect( p.count == 2 * static_cast<std::size_t>( p.n ),
              "F2/NATURAL k=" + std::to_string( p.n ) + ": expected 2k, got " +
                  std::to_string( p.count ) );
  c.expect( classify_growth( natural ).cls == GrowthClass::LINEAR,
            "F2/NATURAL did not classify as LINEAR" );

  auto split = measure_series( parse_family( "F2@k/F2_SPLIT" ).tmpl, 1, 14 );
  for ( auto const& p : split.points )
  {
    std::size_t expected = ( std::size_t{ 1 } << ( p.n + 1 ) ) - 2;
    c.expect( p.count == expected, "F2/F2_SPLIT k=" + std::to_string( p.n ) + ": expected " +
                                       std::to_string( expected ) + ", got " +
                                       std::to_string( p.count ) );
  }
  // independent confirmation where the truth-table oracle can reach
  auto split_oracle = oracle_series( parse_family( "F2@k/F2_SPLIT" ).tmpl, 1, 8 );
  for ( auto const& p : split_oracle.points )
    c.expect( p.count == ( std::size_t{ 1 } << ( p.n + 1 ) ) - 2,
              "oracle disagrees with closed form at k=" + std::to_string( p.n ) );
  c.expect( classify_growth( split ).cls == GrowthClass::EXPONENTIAL,
            "F2/F2_SPLIT did not classify as EXPONENTIAL" );
  CHECK( c.finish() );
}

TEST_CASE( "criterion 3: adjudication of the 3k+1 claim" )
{
  Criterion c( "criterion 3 (3k+1 claim: refuted base/step, confirmed bound/class)" );

  ProofClaim claim = parse_claim( slurp( fixture_path( "claims/f2_textbook.json" ) ) );
  VerificationReport report = verify( claim, 12 );

  c.expect( report.overall == VerificationReport::Overall::REFUTED, "overall is not REFUTED" );
  auto const& base = report.verdict( Aspect::BASE_CASE );
  c.expect( base.status == AspectVerdict::Status::REFUTED && base.witness_n == 1 &&
                base.claimed == 3 && base.measured == 2,
            "base case verdict is not REFUTED(1, 3, 2)" );
  auto const& step = report.verdict( Aspect::STEP_RECURRENCE );
  c.expect( step.status == AspectVerdict::Status::REFUTED, "step recurrence is not REFUTED" );
  auto const& bound = report.verdict( Aspect::BOUND );
  c.expect( bound.status == AspectVerdict::Status::CONFIRMED_UP_TO && bound.n_max >= 12,
            "bound is not CONFIRMED_UP_TO(>=12)" );
  c.expect( report.verdict( Aspect::GROWTH_CLASS ).status == AspectVerdict::Status::CONFIRMED_UP_TO,
            "growth class is not CONFIRMED" );
  CHECK( c.finish() );
}

TEST_CASE( "criterion 4: adjudication of the 4-per-block claim" )
{
  Criterion c( "criterion 4 (4-per-block claim refuted; F3 counts are 3k)" );

  ProofClaim claim = parse_claim( slurp( fixture_path( "claims/f3_textbook.json" ) ) );
  VerificationReport report = verify( claim, 12 );
  auto const& step = report.verdict( Aspect::STEP_RECURRENCE );
  c.expect( step.status == AspectVerdict::Status::REFUTED && step.witness_n == 2 &&
                step.claimed == 4 && step.measured == 3,
            "step recurrence verdict is not REFUTED(2, 4, 3)" );

  auto series = measure_series( parse_family( "F3@k/NATURAL" ).tmpl, 1, 40 );
  for ( auto const& p : series.points )
    c.expect( p.count == 3 * static_cast<std::size_t>( p.n ),
              "F3/NATURAL k=" + std::to_string( p.n ) + ": expected 3k, got " +
                  std::to_string( p.count ) );
  CHECK( c.finish() );
}

TEST_CASE( "criterion 5: symmetric-family bounds and parity" )
{
  Criterion c( "criterion 5 (symmetric triangular bound, level law, parity 2n-1)" );

  for ( auto const* fam : { "SYM_EXACTLY[k=HALF]@n/NATURAL", "SYM_THRESHOLD[k=HALF]@n/NATURAL" } )
  {
    auto series = measure_series( parse_family( fam ).tmpl, 2, 32 );
    for ( auto const& p : series.points )
    {
      std::size_t cap = static_cast<std::size_t>( ( p.n + 1 ) * ( p.n + 2 ) / 2 );
      c.expect( p.count <= cap, std::string( fam ) + " n=" + std::to_string( p.n ) +
                                    ": count " + std::to_string( p.count ) + " exceeds " +
                                    std::to_string( cap ) );
      for ( std::size_t j = 1; j <= p.profile.counts.size(); ++j )
        c.expect( p.profile.counts[j - 1] <= j,
                  std::string( fam ) + " n=" + std::to_string( p.n ) + ": level " +
                      std::to_string( j ) + " has " + std::to_string( p.profile.counts[j - 1] ) +
                      " nodes" );
    }
    auto verdict = classify_growth( series );
    c.expect( ( verdict.cls == GrowthClass::POLYNOMIAL || verdict.cls == GrowthClass::LINEAR ) &&
                  verdict.degree <= 2,
              std::string( fam ) + " did not classify as POLYNOMIAL(d<=2)" );
  }

  auto parity = measure_series( parse_family( "PARITY@n/NATURAL" ).tmpl, 2, 64 );
  for ( auto const& p : parity.points )
    c.expect( p.count == 2 * static_cast<std::size_t>( p.n ) - 1,
              "PARITY n=" + std::to_string( p.n ) + ": expected 2n-1, got " +
                  std::to_string( p.count ) );
  CHECK( c.finish() );
}

TEST_CASE( "criterion 6: multiplier hardness under both orderings" )
{
  Criterion c( "criterion 6 (middle product bit exponential, no poly bound survives)" );

  for ( auto const* fam :
        { "MUL_BIT[m=n-1]@n/MUL_INTERLEAVED", "MUL_BIT[m=n-1]@n/MUL_BLOCKED" } )
  {
    auto series = measure_series( parse_family( fam ).tmpl, 3, 10 );
    c.expect( !series.truncated, std::string( fam ) + " truncated under the default cap" );
    c.expect( classify_growth( series ).cls == GrowthClass::EXPONENTIAL,
              std::string( fam ) + " did not classify as EXPONENTIAL" );

    // refutation is monotone in c and d, so c = 64 at each degree covers
    // every smaller constant, and each degree is checked on its own
    for ( int d = 0; d <= 3; ++d )
    {
      auto check = check_poly_bound( series, 64, 1, d );
      c.expect( !check.confirmed, std::string( fam ) + ": bound 64*n^" + std::to_string( d ) +
                                      " was not refuted on n=3..10" );
    }
  }
  CHECK( c.finish() );
}

TEST_CASE( "criterion 7: mock pipeline end to end" )
{
  Criterion c( "criterion 7 (sketch -> extract -> verify -> render via CLI)" );

  std::string mock_dir = fixture_path( "mock" );
  int code = run_cli( "sketch --family F2@k/NATURAL --provider mock:" + mock_dir +
                      " --to 12 --out /tmp/pfv_acc_f2" );
  c.expect( code == 1, "mock F2 sketch: expected exit 1 (refuted claim), got " +
                           std::to_string( code ) );
  c.expect( slurp( "/tmp/pfv_cli_stdout.txt" ).find( "status=REFUTED" ) != std::string::npos,
            "mock F2 sketch did not end with status=REFUTED" );

  std::string proof = slurp( "/tmp/pfv_acc_f2.proof.md" );
  for ( auto const* section : { "Base Case", "Inductive Hypothesis", "Inductive Step" } )
    c.expect( proof.find( section ) != std::string::npos,
              std::string( "proof lacks section: " ) + section );
  c.expect( proof.find( "for all tested n ≤" ) != std::string::npos,
            "proof lacks the phrase 'for all tested n ≤'" );
  c.expect( !slurp( "/tmp/pfv_acc_f2.raw.txt" ).empty(), "raw sketch text was not written" );
  c.expect( !slurp( "/tmp/pfv_acc_f2.report.json" ).empty(), "report JSON was not written" );

  int prose_code = run_cli( "sketch --family F2@k/NATURAL --provider mock:" +
                            fixture_path( "mock_prose" ) + " --to 12 --out /tmp/pfv_acc_prose" );
  c.expect( prose_code == 4, "prose-only fixture: expected exit 4, got " +
                                 std::to_string( prose_code ) );
  c.expect( slurp( "/tmp/pfv_cli_stdout.txt" ).find( "status=NO_CLAIM" ) != std::string::npos,
            "prose-only fixture did not end with status=NO_CLAIM" );
  CHECK( c.finish() );
}

TEST_CASE( "criterion 8: round-trip identity and determinism" )
{
  Criterion c( "criterion 8 (claim round-trips, byte-identical repeated verification)" );

  char const* families[] = { "F2@k/NATURAL", "F3@k/NATURAL", "PARITY@n/REVERSED",
                             "SYM_EXACTLY[k=HALF]@n/NATURAL" };
  std::mt19937 rng( 2026 );
  std::uniform_int_distribution<int> coeff( 1, 9 );
  int round_trips = 0;
  for ( int round = 0; round < 120; ++round )
  {
    nlohmann::json doc;
    doc["family"] = families[round % 4];
    doc["base_n"] = 1 + round % 5;
    doc["base_size"] = coeff( rng );
    doc["step_delta"] = std::to_string( coeff( rng ) );
    int shape = round % 3;
    if ( shape == 0 )
    {
      doc["bound"] = std::to_string( coeff( rng ) ) + "*n+" + std::to_string( coeff( rng ) );
      doc["growth_class"] = "LINEAR";
    }
    else if ( shape == 1 )
    {
      int d = 2 + round % 3;
      doc["bound"] = std::to_string( coeff( rng ) ) + "*n^" + std::to_string( d );
      doc["growth_class"] = "POLYNOMIAL(" + std::to_string( d ) + ")";
    }
    else
    {
      doc["bound"] = "2^n";
      doc["growth_class"] = "EXPONENTIAL";
    }
    doc["narrative"] = "generated claim " + std::to_string( round );

    std::string once = serialize_claim( parse_claim( doc.dump() ) );
    std::string twice = serialize_claim( parse_claim( once ) );
    c.expect( once == twice, "claim round-trip changed bytes in round " +
                                 std::to_string( round ) );
    ++round_trips;
  }
  c.expect( round_trips >= 100, "fewer than 100 round-trips exercised" );

  for ( auto const* fixture : { "claims/f2_textbook.json", "claims/f2_split.json",
                                "claims/sym_half.json" } )
  {
    ProofClaim claim = parse_claim( slurp( fixture_path( fixture ) ) );
    std::string a = serialize_report( verify( claim, 12 ) );
    std::string b = serialize_report( verify( claim, 12 ) );
    c.expect( a == b, std::string( fixture ) + ": repeated verification differs" );
  }
  CHECK( c.finish() );
}
