#include <catch2/catch_amalgamated.hpp>

#include <pfv/measurement.hpp>

using namespace pfv;

namespace
{

std::vector<std::size_t> counts_of( SizeSeries const& s )
{
  std::vector<std::size_t> out;
  for ( auto const& p : s.points )
    out.push_back( p.count );
  return out;
}

SizeSeries series_from_counts( std::vector<std::size_t> const& counts, long n_from = 1 )
{
  SizeSeries s;
  for ( std::size_t i = 0; i < counts.size(); ++i )
    s.points.push_back( { n_from + static_cast<long>( i ), counts[i], {} } );
  return s;
}

} // namespace

TEST_CASE( "oracle fixed points" )
{
  // AND of 2 variables
  auto [c_and, p_and] = oracle_size( at_parameter( parse_family( "ALL_AND@n/NATURAL" ).tmpl, 2 ) );
  CHECK( c_and == 2 );
  CHECK( p_and.counts == std::vector<std::size_t>{ 1, 1 } );

  auto [c_par, p_par] = oracle_size( at_parameter( parse_family( "PARITY@n/NATURAL" ).tmpl, 3 ) );
  CHECK( c_par == 5 );
  CHECK( p_par.counts == std::vector<std::size_t>{ 1, 2, 2 } );

  auto [c_sym, p_sym] =
      oracle_size( at_parameter( parse_family( "SYM_EXACTLY[k=2]@n/NATURAL" ).tmpl, 4 ) );
  CHECK( c_sym == 8 );
  CHECK( p_sym.counts == std::vector<std::size_t>{ 1, 2, 3, 2 } );

  CHECK_THROWS_AS( oracle_size( at_parameter( parse_family( "PARITY@n/NATURAL" ).tmpl, 21 ) ),
                   OracleCapacityError );
}

TEST_CASE( "measured series match the oracle-derived closed forms" )
{
  auto f2 = measure_series( parse_family( "F2@k/NATURAL" ).tmpl, 1, 5 );
  CHECK( counts_of( f2 ) == std::vector<std::size_t>{ 2, 4, 6, 8, 10 } );

  auto f3 = measure_series( parse_family( "F3@k/NATURAL" ).tmpl, 1, 4 );
  CHECK( counts_of( f3 ) == std::vector<std::size_t>{ 3, 6, 9, 12 } );

  auto split = measure_series( parse_family( "F2@k/F2_SPLIT" ).tmpl, 1, 5 );
  CHECK( counts_of( split ) == std::vector<std::size_t>{ 2, 6, 14, 30, 62 } );

  // f2 with k=2 under the natural order
  CHECK( f2.points[1].count == 4 );
  CHECK( f2.source == SeriesSource::ENGINE );
}

TEST_CASE( "engine and oracle agree" )
{
  for ( auto const* fam : { "F2@k/NATURAL", "F2@k/F2_SPLIT", "F3@k/NATURAL",
                            "SYM_EXACTLY[k=HALF]@n/NATURAL", "PARITY@n/REVERSED",
                            "MUL_BIT[m=n-1]@n/MUL_INTERLEAVED" } )
  {
    auto tmpl = parse_family( fam ).tmpl;
    for ( long n = 1; n <= 4; ++n )
    {
      FamilySpec spec = at_parameter( tmpl, n );
      if ( variable_count( spec ) > 16 )
        continue;
      auto engine = measure_series( tmpl, n, n );
      auto [count, profile] = oracle_size( spec );
      REQUIRE( engine.points[0].count == count );
      REQUIRE( engine.points[0].profile == profile );
    }
  }
}

TEST_CASE( "series invariants" )
{
  auto series = measure_series( parse_family( "SYM_THRESHOLD[k=HALF]@n/NATURAL" ).tmpl, 1, 10 );
  long prev = 0;
  for ( auto const& p : series.points )
  {
    CHECK( p.n > prev );
    prev = p.n;
    CHECK( p.count == p.profile.total() );
  }
  // determinism
  auto again = measure_series( parse_family( "SYM_THRESHOLD[k=HALF]@n/NATURAL" ).tmpl, 1, 10 );
  CHECK( series == again );
}

TEST_CASE( "symmetric ordering invariance and level law" )
{
  for ( auto const* fam : { "SYM_EXACTLY[k=HALF]@n", "SYM_THRESHOLD[k=HALF]@n", "PARITY@n" } )
  {
    auto natural = measure_series( parse_family( std::string( fam ) + "/NATURAL" ).tmpl, 2, 12 );
    auto reversed = measure_series( parse_family( std::string( fam ) + "/REVERSED" ).tmpl, 2, 12 );
    for ( std::size_t i = 0; i < natural.points.size(); ++i )
    {
      REQUIRE( natural.points[i].count == reversed.points[i].count );
      // level j holds at most j nodes (1-indexed)
      for ( std::size_t j = 0; j < natural.points[i].profile.counts.size(); ++j )
        REQUIRE( natural.points[i].profile.counts[j] <= j + 1 );
    }
  }
}

TEST_CASE( "budget truncation is explicit" )
{
  MeasureConfig cfg;
  cfg.node_cap = 100;
  auto series = measure_series( parse_family( "F2@k/F2_SPLIT" ).tmpl, 1, 10, cfg );
  CHECK( series.truncated );
  CHECK( series.truncated_at == 6 ); // 2^7 - 2 = 126 > 100
  CHECK( counts_of( series ) == std::vector<std::size_t>{ 2, 6, 14, 30, 62 } );
}

TEST_CASE( "growth classification" )
{
  CHECK( classify_growth( series_from_counts( { 2, 4, 6, 8, 10 } ) ).cls == GrowthClass::LINEAR );
  CHECK( classify_growth( series_from_counts( { 2, 6, 14, 30, 62 } ) ).cls ==
         GrowthClass::EXPONENTIAL );

  auto tri = classify_growth( series_from_counts( { 1, 3, 6, 10, 15 } ) );
  CHECK( tri.cls == GrowthClass::POLYNOMIAL );
  CHECK( tri.degree == 2 );

  CHECK_THROWS_AS( classify_growth( series_from_counts( { 1, 2, 3 } ) ), InsufficientData );

  // constant series is a degree-0 polynomial
  auto flat = classify_growth( series_from_counts( { 5, 5, 5, 5, 5 } ) );
  CHECK( flat.cls == GrowthClass::POLYNOMIAL );
  CHECK( flat.degree == 0 );

  // dominating constant above the cap is inconclusive
  GrowthConfig tight;
  tight.c_max = 1.0;
  CHECK( classify_growth( series_from_counts( { 10, 20, 30, 40 } ), tight ).cls ==
         GrowthClass::INCONCLUSIVE );
}

TEST_CASE( "growth classification on measured families" )
{
  CHECK( classify_growth( measure_series( parse_family( "F2@k/NATURAL" ).tmpl, 1, 12 ) ).cls ==
         GrowthClass::LINEAR );
  CHECK( classify_growth( measure_series( parse_family( "F2@k/F2_SPLIT" ).tmpl, 1, 12 ) ).cls ==
         GrowthClass::EXPONENTIAL );
  auto sym = classify_growth(
      measure_series( parse_family( "SYM_EXACTLY[k=HALF]@n/NATURAL" ).tmpl, 2, 24 ) );
  CHECK( sym.cls == GrowthClass::POLYNOMIAL );
  CHECK( sym.degree == 2 );
}

TEST_CASE( "polynomial bound check" )
{
  auto f2 = measure_series( parse_family( "F2@k/NATURAL" ).tmpl, 1, 12 );
  // counts are 2k, so 3k+1 dominates
  auto ok = check_poly_bound( f2, 3, 1, 1 );
  CHECK( ok.confirmed );
  CHECK( ok.confirmed_up_to == 12 );

  auto split = measure_series( parse_family( "F2@k/F2_SPLIT" ).tmpl, 1, 14 );
  auto bad = check_poly_bound( split, 64, 1, 1 ); // 2^{k+1}-2 outgrows 64k
  CHECK_FALSE( bad.confirmed );
  CHECK( bad.witness_n == 9 ); // 1022 > 576
  CHECK( bad.measured == 1022 );

  // monotone refutation: smaller c refutes at the same or earlier n
  auto worse = check_poly_bound( split, 32, 1, 1 );
  CHECK_FALSE( worse.confirmed );
  CHECK( worse.witness_n <= bad.witness_n );

  // zero bound against the zero function
  SizeSeries zero;
  zero.points = { { 1, 0, {} }, { 2, 0, {} } };
  CHECK( check_poly_bound( zero, 0, 1, 0 ).confirmed );
}

TEST_CASE( "csv export" )
{
  auto series = measure_series( parse_family( "F2@k/NATURAL" ).tmpl, 1, 2 );
  CHECK( series_to_csv( series ) == "n,count,profile,source\n"
                                    "1,2,1;1,ENGINE\n"
                                    "2,4,1;1;1;1,ENGINE\n" );
}
