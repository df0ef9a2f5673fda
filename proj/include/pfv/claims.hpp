#pragma once

#include "bound_expr.hpp"
#include "errors.hpp"
#include "families.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace pfv
{

struct GrowthClaim
{
  enum class Kind
  {
    LINEAR,
    POLYNOMIAL,
    EXPONENTIAL
  };

  Kind kind = Kind::LINEAR;
  int degree = 1; // for POLYNOMIAL

  std::string to_string() const
  {
    switch ( kind )
    {
    case Kind::LINEAR: return "LINEAR";
    case Kind::POLYNOMIAL: return "POLYNOMIAL(" + std::to_string( degree ) + ")";
    case Kind::EXPONENTIAL: return "EXPONENTIAL";
    }
    return "?";
  }

  static GrowthClaim parse( std::string const& s )
  {
    if ( s == "LINEAR" )
      return { Kind::LINEAR, 1 };
    if ( s == "EXPONENTIAL" )
      return { Kind::EXPONENTIAL, 0 };
    if ( s.starts_with( "POLYNOMIAL(" ) && s.ends_with( ")" ) )
    {
      try
      {
        int d = std::stoi( s.substr( 11, s.size() - 12 ) );
        return { Kind::POLYNOMIAL, d };
      }
      catch ( std::exception const& )
      {
      }
    }
    throw ClaimFormatError( "growth_class", "unknown class '" + s + "'" );
  }

  bool operator==( GrowthClaim const& ) const = default;
};

/* Machine-checkable inductive size claim: the contract between LLM output
 * and the verifier. */
struct ProofClaim
{
  FamilyTemplate family;
  std::string family_text; // preserved verbatim for round-trips
  long base_n = 1;
  long long base_size = 0;
  BoundExpr step_delta; // claimed node increment from n to n+1
  BoundExpr bound;
  long long bound_scale_denominator = 1; // bound means bound/denominator
  GrowthClaim growth;
  std::string narrative; // the LLM's prose, carried verbatim
};

struct ClaimSource
{
  enum class Origin
  {
    FIXTURE,
    LLM,
    USER
  };

  Origin origin = Origin::USER;
  std::string provider;
  std::string model;
  std::string timestamp;
  std::string raw_text;
};

namespace detail
{

/* growth_class must match the bound's dominant syntactic construct:
 * literal < n^d < b^n. */
inline void check_growth_consistency( ProofClaim const& claim )
{
  if ( claim.bound.has_exponential() )
  {
    if ( claim.growth.kind != GrowthClaim::Kind::EXPONENTIAL )
      throw ClaimFormatError( "growth_class", "bound is exponential but class is " +
                                                  claim.growth.to_string() );
    return;
  }
  int degree = claim.bound.degree();
  switch ( claim.growth.kind )
  {
  case GrowthClaim::Kind::EXPONENTIAL:
    throw ClaimFormatError( "growth_class", "class EXPONENTIAL needs an exponential bound" );
  case GrowthClaim::Kind::LINEAR:
    if ( degree > 1 )
      throw ClaimFormatError( "growth_class", "bound has degree " + std::to_string( degree ) +
                                                  " but class is LINEAR" );
    break;
  case GrowthClaim::Kind::POLYNOMIAL:
    if ( degree != claim.growth.degree )
      throw ClaimFormatError( "growth_class",
                              "bound has degree " + std::to_string( degree ) + " but class is " +
                                  claim.growth.to_string() );
    break;
  }
}

} // namespace detail

/* Claim file format: a flat JSON object; unknown keys are rejected. */
inline ProofClaim parse_claim( std::string const& document )
{
  nlohmann::json doc;
  try
  {
    doc = nlohmann::json::parse( document );
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw ClaimFormatError( "document", e.what() );
  }
  if ( !doc.is_object() )
    throw ClaimFormatError( "document", "claim must be a JSON object" );

  static char const* known_keys[] = { "family", "base_n", "base_size", "step_delta",
                                      "bound", "bound_scale_denominator", "growth_class",
                                      "narrative" };
  for ( auto const& [key, value] : doc.items() )
  {
    bool ok = false;
    for ( auto const* k : known_keys )
      ok = ok || key == k;
    if ( !ok )
      throw ClaimFormatError( key, "unknown key" );
  }

  auto require = [&]( char const* key ) -> nlohmann::json const& {
    if ( !doc.contains( key ) )
      throw ClaimFormatError( key, "missing" );
    return doc.at( key );
  };

  ProofClaim claim;
  if ( !require( "family" ).is_string() )
    throw ClaimFormatError( "family", "must be a string" );
  claim.family_text = doc.at( "family" ).get<std::string>();
  try
  {
    ParsedFamily parsed = parse_family( claim.family_text );
    claim.family = parsed.tmpl;
  }
  catch ( FamilySyntaxError const& e )
  {
    throw ClaimFormatError( "family", e.what() );
  }

  if ( !require( "base_n" ).is_number_integer() )
    throw ClaimFormatError( "base_n", "must be an integer" );
  claim.base_n = doc.at( "base_n" ).get<long>();
  if ( claim.base_n < 1 )
    throw ClaimFormatError( "base_n", "must be >= 1" );

  if ( !require( "base_size" ).is_number_integer() )
    throw ClaimFormatError( "base_size", "must be an integer" );
  claim.base_size = doc.at( "base_size" ).get<long long>();

  auto parse_expr_field = [&]( char const* key ) {
    if ( !require( key ).is_string() )
      throw ClaimFormatError( key, "must be a string expression" );
    try
    {
      return BoundExpr::parse( doc.at( key ).get<std::string>() );
    }
    catch ( ParseError const& e )
    {
      throw ClaimFormatError( key, e.what() );
    }
  };
  claim.step_delta = parse_expr_field( "step_delta" );
  claim.bound = parse_expr_field( "bound" );

  if ( doc.contains( "bound_scale_denominator" ) )
  {
    if ( !doc.at( "bound_scale_denominator" ).is_number_integer() )
      throw ClaimFormatError( "bound_scale_denominator", "must be an integer" );
    claim.bound_scale_denominator = doc.at( "bound_scale_denominator" ).get<long long>();
    if ( claim.bound_scale_denominator != 1 && claim.bound_scale_denominator != 2 )
      throw ClaimFormatError( "bound_scale_denominator", "must be 1 or 2" );
  }

  if ( !require( "growth_class" ).is_string() )
    throw ClaimFormatError( "growth_class", "must be a string" );
  claim.growth = GrowthClaim::parse( doc.at( "growth_class" ).get<std::string>() );

  if ( doc.contains( "narrative" ) )
  {
    if ( !doc.at( "narrative" ).is_string() )
      throw ClaimFormatError( "narrative", "must be a string" );
    claim.narrative = doc.at( "narrative" ).get<std::string>();
  }

  detail::check_growth_consistency( claim );
  return claim;
}

inline std::string serialize_claim( ProofClaim const& claim )
{
  nlohmann::json doc;
  doc["family"] = claim.family_text;
  doc["base_n"] = claim.base_n;
  doc["base_size"] = claim.base_size;
  doc["step_delta"] = claim.step_delta.text();
  doc["bound"] = claim.bound.text();
  doc["bound_scale_denominator"] = claim.bound_scale_denominator;
  doc["growth_class"] = claim.growth.to_string();
  doc["narrative"] = claim.narrative;
  return doc.dump( 2 );
}

} // namespace pfv
