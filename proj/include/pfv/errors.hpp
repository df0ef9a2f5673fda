#pragma once

#include <stdexcept>
#include <string>

namespace pfv
{

struct OrderError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct ManagerMismatch : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct AssignmentError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

/* Unique table grew past the configured node cap. */
struct NodeBudgetError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct OracleCapacityError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error
{
  ParseError( std::string const& msg, std::size_t position )
      : std::runtime_error( msg + " at position " + std::to_string( position ) ), pos( position )
  {
  }
  std::size_t pos;
};

struct NegativeBound : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct EvalOverflow : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct ClaimFormatError : std::runtime_error
{
  ClaimFormatError( std::string const& field_name, std::string const& detail = "" )
      : std::runtime_error( "claim format error in field '" + field_name + "'" +
                            ( detail.empty() ? "" : ": " + detail ) ),
        field( field_name )
  {
  }
  std::string field;
};

struct ReportMismatch : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct NoClaimBlock : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct AmbiguousClaim : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

struct ProviderError : std::runtime_error
{
  ProviderError( std::string const& msg, bool retryable_ = false, int status_ = 0 )
      : std::runtime_error( msg ), retryable( retryable_ ), status( status_ )
  {
  }
  bool retryable;
  int status;
};

struct ConfigError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

} // namespace pfv
