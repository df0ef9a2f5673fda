#include <catch2/catch_amalgamated.hpp>

#include <pfv/llm_bridge.hpp>
#include <pfv/verifier.hpp>

#include <cstdlib>
#include <thread>

using namespace pfv;

TEST_CASE( "provider strings" )
{
  ProviderConfig mock = parse_provider( "mock:/tmp/fixtures" );
  CHECK( mock.kind == ProviderConfig::Kind::MOCK );
  CHECK( mock.fixture_dir == "/tmp/fixtures" );
  CHECK( mock.to_string() == "mock:/tmp/fixtures" );

  ProviderConfig http = parse_provider( "http:http://localhost:8080/v1/chat#test-model" );
  CHECK( http.kind == ProviderConfig::Kind::HTTP );
  CHECK( http.endpoint == "http://localhost:8080/v1/chat" );
  CHECK( http.model == "test-model" );

  CHECK_THROWS_AS( parse_provider( "mock:" ), ConfigError );
  CHECK_THROWS_AS( parse_provider( "http:http://localhost/v1" ), ConfigError );
  CHECK_THROWS_AS( parse_provider( "carrier-pigeon:coop" ), ConfigError );
}

TEST_CASE( "prompts are deterministic and family-specific" )
{
  auto f2 = parse_family( "F2@k/NATURAL" ).tmpl;
  PromptBundle a = build_prompt( f2 );
  PromptBundle b = build_prompt( f2 );
  CHECK( a.system_text == b.system_text );
  CHECK( a.user_text == b.user_text );
  CHECK( a.family_id == "F2" );
  CHECK( a.user_text.find( "x1*x2 + x3*x4 + ... + x(2k-1)*x(2k)" ) != std::string::npos );
  CHECK( a.system_text.find( claim_block_tag ) != std::string::npos );

  auto sym = build_prompt( parse_family( "SYM_EXACTLY[k=HALF]@n/NATURAL" ).tmpl );
  CHECK( sym.family_id == "SYM_EXACTLY" );
  CHECK( sym.user_text.find( "depends only on the Hamming weight" ) != std::string::npos );

  auto mul = build_prompt( parse_family( "MUL_BIT[m=n-1]@n/MUL_INTERLEAVED" ).tmpl );
  CHECK( mul.user_text.find( "ordering matters" ) != std::string::npos );
}

TEST_CASE( "claim extraction is strict" )
{
  std::string good = "Some prose.\n```pfv-claim\n"
                     R"({"family":"F2@k/NATURAL","base_n":1,"base_size":2,)"
                     R"("step_delta":"2","bound":"2*k","growth_class":"LINEAR"})"
                     "\n```\nTrailing remark.";
  ProofClaim claim = extract_claim( good );
  CHECK( claim.base_size == 2 );
  CHECK( claim.narrative == "Some prose.\nTrailing remark." );

  CHECK_THROWS_AS( extract_claim( "prose with no block at all" ), NoClaimBlock );
  CHECK_THROWS_AS( extract_claim( "```pfv-claim\n{\"family\":" ), NoClaimBlock );
  std::string doubled = good + "\n" + good;
  CHECK_THROWS_AS( extract_claim( doubled ), AmbiguousClaim );

  // a block that parses but violates the claim format propagates the error
  CHECK_THROWS_AS( extract_claim( "```pfv-claim\n{\"family\":\"F2@k/NATURAL\"}\n```" ),
                   ClaimFormatError );
}

TEST_CASE( "mock provider serves fixtures deterministically" )
{
  ProviderConfig cfg = parse_provider( std::string( "mock:" ) + PFV_FIXTURE_DIR + "/mock" );
  PromptBundle prompt = build_prompt( parse_family( "F2@k/NATURAL" ).tmpl );

  SketchResult a = request_sketch( cfg, prompt );
  SketchResult b = request_sketch( cfg, prompt );
  CHECK( a.raw == b.raw );
  REQUIRE( a.claim.has_value() );
  CHECK( a.claim->base_size == 3 );
  CHECK( a.claim->bound.text() == "3*k+1" );
  CHECK( a.source.origin == ClaimSource::Origin::FIXTURE );
  CHECK( a.source.raw_text == a.raw );

  // prose-only fixture: no claim, diagnostics explain why
  ProviderConfig prose = parse_provider( std::string( "mock:" ) + PFV_FIXTURE_DIR + "/mock_prose" );
  SketchResult none = request_sketch( prose, prompt );
  CHECK_FALSE( none.claim.has_value() );
  CHECK( none.diagnostics.find( "pfv-claim" ) != std::string::npos );

  ProviderConfig missing = parse_provider( "mock:/nonexistent-dir" );
  CHECK_THROWS_AS( request_sketch( missing, prompt ), ProviderError );
}

TEST_CASE( "fixture sketches verify end to end" )
{
  ProviderConfig cfg = parse_provider( std::string( "mock:" ) + PFV_FIXTURE_DIR + "/mock" );

  // the textbook F2 sketch is refuted, but its bound is confirmed
  auto f2 = request_sketch( cfg, build_prompt( parse_family( "F2@k/NATURAL" ).tmpl ) );
  REQUIRE( f2.claim.has_value() );
  VerificationReport report = verify( *f2.claim, 12 );
  CHECK( report.overall == VerificationReport::Overall::REFUTED );
  CHECK( report.verdict( Aspect::BOUND ).status == AspectVerdict::Status::CONFIRMED_UP_TO );

  // the symmetric sketch's scaled bound survives
  auto sym = request_sketch( cfg, build_prompt( parse_family( "SYM_EXACTLY[k=HALF]@n/NATURAL" ).tmpl ) );
  REQUIRE( sym.claim.has_value() );
  VerificationReport sym_report = verify( *sym.claim, 16 );
  CHECK( sym_report.verdict( Aspect::BOUND ).status == AspectVerdict::Status::CONFIRMED_UP_TO );
}

TEST_CASE( "http provider speaks the chat-completion protocol" )
{
  std::string const key = "test-key-12345";
  setenv( credential_env_var, key.c_str(), 1 );

  std::string seen_auth;
  std::string seen_body;
  httplib::Server server;
  server.Post( "/v1/chat/completions", [&]( httplib::Request const& req, httplib::Response& res ) {
    seen_auth = req.get_header_value( "Authorization" );
    seen_body = req.body;
    nlohmann::json reply;
    reply["choices"] = { { { "message", { { "role", "assistant" }, { "content", "no block here" } } } } };
    res.set_content( reply.dump(), "application/json" );
  } );
  server.Post( "/v1/flaky", []( httplib::Request const&, httplib::Response& res ) {
    res.status = 503;
  } );
  int port = server.bind_to_any_port( "127.0.0.1" );
  REQUIRE( port > 0 );
  std::thread worker( [&] { server.listen_after_bind(); } );
  server.wait_until_ready();

  std::string base = "http://127.0.0.1:" + std::to_string( port );
  PromptBundle prompt = build_prompt( parse_family( "F2@k/NATURAL" ).tmpl );

  ProviderConfig cfg = parse_provider( "http:" + base + "/v1/chat/completions#test-model" );
  SketchResult result = request_sketch( cfg, prompt );
  CHECK( result.raw == "no block here" );
  CHECK_FALSE( result.claim.has_value() );
  CHECK( result.source.origin == ClaimSource::Origin::LLM );
  CHECK( result.source.model == "test-model" );
  CHECK( seen_auth == "Bearer " + key );

  auto body = nlohmann::json::parse( seen_body );
  CHECK( body.at( "model" ) == "test-model" );
  CHECK( body.at( "temperature" ) == 0 );
  CHECK( body.at( "messages" ).size() == 2 );
  CHECK( body.at( "messages" )[0].at( "role" ) == "system" );
  // the credential travels in the header only, never in the payload
  CHECK( seen_body.find( key ) == std::string::npos );

  // non-2xx surfaces as a ProviderError with the status attached
  ProviderConfig flaky = parse_provider( "http:" + base + "/v1/flaky#test-model" );
  try
  {
    request_sketch( flaky, prompt );
    FAIL( "expected ProviderError" );
  }
  catch ( ProviderError const& e )
  {
    CHECK( e.status == 503 );
    CHECK( e.retryable );
  }

  // unreachable endpoint: retryable transport error
  ProviderConfig dead = parse_provider( "http:http://127.0.0.1:1#test-model" );
  try
  {
    request_sketch( dead, prompt );
    FAIL( "expected ProviderError" );
  }
  catch ( ProviderError const& e )
  {
    CHECK( e.retryable );
  }

  // a missing credential is a configuration error, not a request
  unsetenv( credential_env_var );
  CHECK_THROWS_AS( request_sketch( cfg, prompt ), ConfigError );

  server.stop();
  worker.join();
}

TEST_CASE( "serialized artifacts never leak the credential" )
{
  std::string const key = "super-secret-credential";
  setenv( credential_env_var, key.c_str(), 1 );

  ProviderConfig cfg = parse_provider( std::string( "mock:" ) + PFV_FIXTURE_DIR + "/mock" );
  auto sketch = request_sketch( cfg, build_prompt( parse_family( "F2@k/NATURAL" ).tmpl ) );
  REQUIRE( sketch.claim.has_value() );
  VerificationReport report = verify( *sketch.claim, 8 );

  CHECK( serialize_claim( *sketch.claim ).find( key ) == std::string::npos );
  CHECK( serialize_report( report ).find( key ) == std::string::npos );
  CHECK( render_proof( *sketch.claim, report ).find( key ) == std::string::npos );
  CHECK( cfg.to_string().find( key ) == std::string::npos );
  unsetenv( credential_env_var );
}
