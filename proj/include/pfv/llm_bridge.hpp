#pragma once

#include "claims.hpp"
#include "errors.hpp"
#include "families.hpp"

#include <httplib.h>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

namespace pfv
{

inline constexpr char const* credential_env_var = "PFV_LLM_API_KEY";
inline constexpr char const* claim_block_tag = "pfv-claim";

/* Provider selection.  Credentials come from the environment only and are
 * never stored or serialized. */
struct ProviderConfig
{
  enum class Kind
  {
    MOCK,
    HTTP
  };

  Kind kind = Kind::MOCK;
  std::string fixture_dir; // MOCK
  std::string endpoint;    // HTTP
  std::string model;       // HTTP
  int timeout_seconds = 30;

  std::string to_string() const
  {
    if ( kind == Kind::MOCK )
      return "mock:" + fixture_dir;
    return "http:" + endpoint + "#" + model;
  }
};

/* "mock:<dir>" or "http:<url>#<model>" */
inline ProviderConfig parse_provider( std::string const& text )
{
  ProviderConfig cfg;
  if ( text.starts_with( "mock:" ) )
  {
    cfg.kind = ProviderConfig::Kind::MOCK;
    cfg.fixture_dir = text.substr( 5 );
    if ( cfg.fixture_dir.empty() )
      throw ConfigError( "mock provider needs a fixture directory" );
    return cfg;
  }
  if ( text.starts_with( "http:" ) )
  {
    cfg.kind = ProviderConfig::Kind::HTTP;
    std::string rest = text.substr( 5 );
    auto hash = rest.rfind( '#' );
    if ( hash == std::string::npos )
      throw ConfigError( "http provider needs '<url>#<model>'" );
    cfg.endpoint = rest.substr( 0, hash );
    cfg.model = rest.substr( hash + 1 );
    if ( cfg.endpoint.empty() || cfg.model.empty() )
      throw ConfigError( "http provider needs non-empty endpoint and model" );
    return cfg;
  }
  throw ConfigError( "unknown provider '" + text + "'" );
}

struct PromptBundle
{
  std::string system_text;
  std::string user_text;
  std::string family_id; // fixture key for the mock provider
};

struct SketchResult
{
  std::string raw;
  std::optional<ProofClaim> claim;
  std::string diagnostics;
  ClaimSource source;
};

namespace detail
{

inline std::string family_formula_text( FamilyTemplate const& tmpl )
{
  switch ( tmpl.family )
  {
  case FamilyKind::F2_PAIRS:
    return "f_k = x1*x2 + x3*x4 + ... + x(2k-1)*x(2k) over 2k variables";
  case FamilyKind::F3_TRIPLES:
    return "f_k = x1*x2*x3 + x4*x5*x6 + ... + x(3k-2)*x(3k-1)*x(3k) over 3k variables";
  case FamilyKind::SYM_EXACTLY:
    return "the totally symmetric function over n variables that is 1 exactly when the input "
           "weight equals " +
           tmpl.rule.to_string() + "; it depends only on the Hamming weight of its input";
  case FamilyKind::SYM_THRESHOLD:
    return "the totally symmetric function over n variables that is 1 exactly when the input "
           "weight is at least " +
           tmpl.rule.to_string() + "; it depends only on the Hamming weight of its input";
  case FamilyKind::PARITY:
    return "the parity (XOR) of n variables";
  case FamilyKind::ALL_AND:
    return "the AND of all n variables";
  case FamilyKind::ALL_OR:
    return "the OR of all n variables";
  case FamilyKind::MUL_BIT:
    return "output bit " + tmpl.rule.to_string() +
           " of the unsigned product of two n-bit operands a and b";
  }
  return "";
}

} // namespace detail

/* Deterministic prompt for one family template.  The model is told to reason
 * in prose and finish with exactly one fenced pfv-claim block. */
inline PromptBundle build_prompt( FamilyTemplate const& tmpl )
{
  PromptBundle bundle;
  bundle.family_id = family_kind_name( tmpl.family );

  bundle.system_text =
      "You analyze sizes of reduced ordered binary decision diagrams (ROBDDs). "
      "Size always means the number of internal (non-terminal) nodes. "
      "Reason in prose first, then end your answer with exactly one fenced code block "
      "tagged '" +
      std::string( claim_block_tag ) +
      "' containing a single JSON object with exactly these keys: "
      "family, base_n, base_size, step_delta, bound, bound_scale_denominator, "
      "growth_class, narrative. "
      "Expressions use integer literals, the parameter symbol n (alias k), +, -, *, "
      "n^d and b^n. growth_class is LINEAR, POLYNOMIAL(d) or EXPONENTIAL.";

  std::ostringstream user;
  user << "Consider the Boolean function family " << format_family( tmpl ) << ", i.e. "
       << detail::family_formula_text( tmpl ) << ".\n\n";
  user << "Give an induction proof sketch for the ROBDD size of this family under the "
       << tmpl.ordering.to_string() << " variable ordering:\n";
  user << "1. Base Case: the size for the smallest parameter.\n";
  user << "2. Inductive Hypothesis: a size bound as a function of the parameter.\n";
  user << "3. Inductive Step: how many nodes one parameter step adds, using the fact that "
          "the BDD can be split at the root into two sub-BDDs over fewer variables.\n";
  if ( tmpl.family == FamilyKind::MUL_BIT )
    user << "State the growth class explicitly; note that the variable ordering matters "
            "greatly for multiplication and say whether your claim depends on the chosen "
            "ordering.\n";
  else
    user << "State the growth class explicitly.\n";
  user << "\nFinish with the fenced " << claim_block_tag << " block.";
  bundle.user_text = user.str();
  return bundle;
}

/* Locates exactly one pfv-claim fenced block and parses it strictly; prose
 * outside the block becomes the narrative.  Nothing is repaired. */
inline ProofClaim extract_claim( std::string const& raw )
{
  std::string const open = std::string( "```" ) + claim_block_tag;
  std::vector<std::pair<std::size_t, std::size_t>> blocks; // [content-begin, content-end)
  std::size_t search = 0;
  while ( true )
  {
    std::size_t begin = raw.find( open, search );
    if ( begin == std::string::npos )
      break;
    std::size_t content = raw.find( '\n', begin );
    if ( content == std::string::npos )
      throw NoClaimBlock( "claim block is not terminated" );
    std::size_t end = raw.find( "```", content );
    if ( end == std::string::npos )
      throw NoClaimBlock( "claim block is not terminated" );
    blocks.emplace_back( content + 1, end );
    search = end + 3;
  }
  if ( blocks.empty() )
    throw NoClaimBlock( "no " + std::string( claim_block_tag ) + " block found" );
  if ( blocks.size() > 1 )
    throw AmbiguousClaim( "found " + std::to_string( blocks.size() ) + " claim blocks" );

  auto [begin, end] = blocks.front();
  ProofClaim claim = parse_claim( raw.substr( begin, end - begin ) );

  std::string prose = raw.substr( 0, raw.rfind( open, begin ) );
  std::string after = raw.substr( std::min( raw.size(), end + 3 ) );
  auto trim = []( std::string s ) {
    auto first = s.find_first_not_of( " \t\r\n" );
    auto last = s.find_last_not_of( " \t\r\n" );
    return first == std::string::npos ? std::string{} : s.substr( first, last - first + 1 );
  };
  std::string narrative = trim( prose );
  std::string tail = trim( after );
  if ( !tail.empty() )
    narrative += ( narrative.empty() ? "" : "\n" ) + tail;
  claim.narrative = narrative;
  return claim;
}

namespace detail
{

inline std::string mock_completion( ProviderConfig const& cfg, PromptBundle const& prompt )
{
  std::string path = cfg.fixture_dir + "/" + prompt.family_id + ".txt";
  std::ifstream in( path, std::ios::binary );
  if ( !in )
    throw ProviderError( "fixture not found: " + path );
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string http_completion( ProviderConfig const& cfg, PromptBundle const& prompt )
{
  char const* key = std::getenv( credential_env_var );
  if ( !key || !*key )
    throw ConfigError( std::string( credential_env_var ) + " is not set" );

  // split "<scheme>://<host>[:<port>]<path>"
  auto scheme_end = cfg.endpoint.find( "://" );
  if ( scheme_end == std::string::npos )
    throw ConfigError( "endpoint must include a scheme: " + cfg.endpoint );
  auto path_begin = cfg.endpoint.find( '/', scheme_end + 3 );
  std::string base = path_begin == std::string::npos ? cfg.endpoint
                                                     : cfg.endpoint.substr( 0, path_begin );
  std::string path = path_begin == std::string::npos ? "/" : cfg.endpoint.substr( path_begin );

  httplib::Client client( base );
  client.set_connection_timeout( cfg.timeout_seconds );
  client.set_read_timeout( cfg.timeout_seconds );

  nlohmann::json body;
  body["model"] = cfg.model;
  body["messages"] = { { { "role", "system" }, { "content", prompt.system_text } },
                       { { "role", "user" }, { "content", prompt.user_text } } };
  body["temperature"] = 0;

  httplib::Headers headers{ { "Authorization", std::string( "Bearer " ) + key } };
  auto res = client.Post( path, headers, body.dump(), "application/json" );
  if ( !res )
    throw ProviderError( "request failed: " + httplib::to_string( res.error() ),
                         /*retryable=*/true );
  if ( res->status < 200 || res->status >= 300 )
    throw ProviderError( "provider returned status " + std::to_string( res->status ),
                         /*retryable=*/res->status >= 500, res->status );
  try
  {
    auto doc = nlohmann::json::parse( res->body );
    return doc.at( "choices" ).at( 0 ).at( "message" ).at( "content" ).get<std::string>();
  }
  catch ( nlohmann::json::exception const& e )
  {
    throw ProviderError( std::string( "malformed completion response: " ) + e.what() );
  }
}

} // namespace detail

inline SketchResult request_sketch( ProviderConfig const& cfg, PromptBundle const& prompt )
{
  SketchResult result;
  if ( cfg.kind == ProviderConfig::Kind::MOCK )
  {
    result.raw = detail::mock_completion( cfg, prompt );
    result.source.origin = ClaimSource::Origin::FIXTURE;
    result.source.provider = "mock";
  }
  else
  {
    result.raw = detail::http_completion( cfg, prompt );
    result.source.origin = ClaimSource::Origin::LLM;
    result.source.provider = cfg.endpoint;
    result.source.model = cfg.model;
  }
  result.source.raw_text = result.raw;
  try
  {
    result.claim = extract_claim( result.raw );
  }
  catch ( std::exception const& e )
  {
    result.diagnostics = e.what();
  }
  return result;
}

} // namespace pfv
