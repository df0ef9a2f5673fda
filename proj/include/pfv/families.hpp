#pragma once

#include "bdd.hpp"
#include "errors.hpp"

#include <charconv>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace pfv
{

enum class FamilyKind
{
  F2_PAIRS,      // x1*x2 + x3*x4 + ... + x(2k-1)*x(2k), parameter = pair count k
  F3_TRIPLES,    // x1*x2*x3 + ..., parameter = triple count k
  SYM_EXACTLY,   // 1 iff Hamming weight == k(n)
  SYM_THRESHOLD, // 1 iff Hamming weight >= k(n)
  PARITY,
  ALL_AND,
  ALL_OR,
  MUL_BIT // output bit m(n) of the product of two unsigned n-bit operands
};

inline std::string family_kind_name( FamilyKind kind )
{
  switch ( kind )
  {
  case FamilyKind::F2_PAIRS: return "F2";
  case FamilyKind::F3_TRIPLES: return "F3";
  case FamilyKind::SYM_EXACTLY: return "SYM_EXACTLY";
  case FamilyKind::SYM_THRESHOLD: return "SYM_THRESHOLD";
  case FamilyKind::PARITY: return "PARITY";
  case FamilyKind::ALL_AND: return "ALL_AND";
  case FamilyKind::ALL_OR: return "ALL_OR";
  case FamilyKind::MUL_BIT: return "MUL_BIT";
  }
  return "?";
}

/* Parameter rule (the k-rule of SYM_* and the m-rule of MUL_BIT) as a
 * function of the family parameter n. */
struct ParamRule
{
  enum class Kind
  {
    CONST,
    HALF,
    N_MINUS_1
  };

  Kind kind = Kind::N_MINUS_1;
  long value = 0; // only for CONST

  long resolve( long n ) const
  {
    switch ( kind )
    {
    case Kind::CONST: return value;
    case Kind::HALF: return n / 2;
    case Kind::N_MINUS_1: return n - 1;
    }
    return 0;
  }

  std::string to_string() const
  {
    switch ( kind )
    {
    case Kind::CONST: return std::to_string( value );
    case Kind::HALF: return "HALF";
    case Kind::N_MINUS_1: return "n-1";
    }
    return "?";
  }

  bool operator==( ParamRule const& ) const = default;
};

struct OrderingPreset
{
  enum class Kind
  {
    NATURAL,
    F2_SPLIT,        // all odd-indexed variables before all even-indexed
    MUL_INTERLEAVED, // a0, b0, a1, b1, ...
    MUL_BLOCKED,     // a0..a(n-1), b0..b(n-1)
    REVERSED,
    EXPLICIT
  };

  Kind kind = Kind::NATURAL;
  std::vector<int> explicit_order; // only for EXPLICIT

  std::string to_string() const
  {
    switch ( kind )
    {
    case Kind::NATURAL: return "NATURAL";
    case Kind::F2_SPLIT: return "F2_SPLIT";
    case Kind::MUL_INTERLEAVED: return "MUL_INTERLEAVED";
    case Kind::MUL_BLOCKED: return "MUL_BLOCKED";
    case Kind::REVERSED: return "REVERSED";
    case Kind::EXPLICIT:
    {
      std::string s = "EXPLICIT(";
      for ( std::size_t i = 0; i < explicit_order.size(); ++i )
      {
        if ( i )
          s += ',';
        s += std::to_string( explicit_order[i] );
      }
      return s + ")";
    }
    }
    return "?";
  }

  bool operator==( OrderingPreset const& ) const = default;
};

/* A family with its parameter left open: the unit a claim or a series is
 * about. */
struct FamilyTemplate
{
  FamilyKind family = FamilyKind::F2_PAIRS;
  ParamRule rule{};
  OrderingPreset ordering{};

  bool has_rule() const
  {
    return family == FamilyKind::SYM_EXACTLY || family == FamilyKind::SYM_THRESHOLD ||
           family == FamilyKind::MUL_BIT;
  }

  bool operator==( FamilyTemplate const& ) const = default;
};

struct FamilySpec
{
  FamilyTemplate tmpl;
  long n = 1;

  FamilyKind family() const { return tmpl.family; }

  bool operator==( FamilySpec const& ) const = default;
};

inline FamilySpec at_parameter( FamilyTemplate const& tmpl, long n )
{
  return FamilySpec{ tmpl, n };
}

inline long variable_count( FamilySpec const& spec )
{
  switch ( spec.family() )
  {
  case FamilyKind::F2_PAIRS: return 2 * spec.n;
  case FamilyKind::F3_TRIPLES: return 3 * spec.n;
  case FamilyKind::SYM_EXACTLY:
  case FamilyKind::SYM_THRESHOLD:
  case FamilyKind::PARITY:
  case FamilyKind::ALL_AND:
  case FamilyKind::ALL_OR: return spec.n;
  case FamilyKind::MUL_BIT: return 2 * spec.n;
  }
  return 0;
}

inline VarOrder resolve_order( FamilySpec const& spec )
{
  long const v = variable_count( spec );
  std::vector<int> seq;
  seq.reserve( static_cast<std::size_t>( v ) );
  switch ( spec.tmpl.ordering.kind )
  {
  case OrderingPreset::Kind::NATURAL:
  case OrderingPreset::Kind::MUL_BLOCKED:
    for ( int i = 1; i <= v; ++i )
      seq.push_back( i );
    break;
  case OrderingPreset::Kind::REVERSED:
    for ( int i = static_cast<int>( v ); i >= 1; --i )
      seq.push_back( i );
    break;
  case OrderingPreset::Kind::F2_SPLIT:
    for ( int i = 1; i <= v; i += 2 )
      seq.push_back( i );
    for ( int i = 2; i <= v; i += 2 )
      seq.push_back( i );
    break;
  case OrderingPreset::Kind::MUL_INTERLEAVED:
  {
    if ( v % 2 != 0 )
      throw OrderError( "MUL_INTERLEAVED needs an even variable count" );
    int half = static_cast<int>( v / 2 );
    for ( int i = 0; i < half; ++i )
    {
      seq.push_back( i + 1 );        // a_i
      seq.push_back( half + i + 1 ); // b_i
    }
    break;
  }
  case OrderingPreset::Kind::EXPLICIT:
    if ( static_cast<long>( spec.tmpl.ordering.explicit_order.size() ) != v )
      throw OrderError( "explicit order has length " +
                        std::to_string( spec.tmpl.ordering.explicit_order.size() ) +
                        ", family needs " + std::to_string( v ) );
    seq = spec.tmpl.ordering.explicit_order;
    break;
  }
  return VarOrder( seq );
}

/* Truth-table ground truth: evaluates the defining formula directly.  Never
 * touches the BDD engine; the measurement oracle and the semantic tests are
 * built on this. */
inline bool eval_spec( FamilySpec const& spec, std::vector<std::uint8_t> const& bits )
{
  long const v = variable_count( spec );
  if ( static_cast<long>( bits.size() ) != v + 1 )
    throw AssignmentError( "expected " + std::to_string( v ) + " assigned bits (1-based)" );
  auto bit = [&]( long i ) { return bits[static_cast<std::size_t>( i )] != 0; };

  switch ( spec.family() )
  {
  case FamilyKind::F2_PAIRS:
    for ( long i = 1; i <= spec.n; ++i )
      if ( bit( 2 * i - 1 ) && bit( 2 * i ) )
        return true;
    return false;
  case FamilyKind::F3_TRIPLES:
    for ( long i = 1; i <= spec.n; ++i )
      if ( bit( 3 * i - 2 ) && bit( 3 * i - 1 ) && bit( 3 * i ) )
        return true;
    return false;
  case FamilyKind::SYM_EXACTLY:
  case FamilyKind::SYM_THRESHOLD:
  case FamilyKind::PARITY:
  case FamilyKind::ALL_AND:
  case FamilyKind::ALL_OR:
  {
    long weight = 0;
    for ( long i = 1; i <= v; ++i )
      weight += bit( i ) ? 1 : 0;
    switch ( spec.family() )
    {
    case FamilyKind::SYM_EXACTLY: return weight == spec.tmpl.rule.resolve( spec.n );
    case FamilyKind::SYM_THRESHOLD: return weight >= spec.tmpl.rule.resolve( spec.n );
    case FamilyKind::PARITY: return ( weight & 1 ) != 0;
    case FamilyKind::ALL_AND: return weight == v;
    default: return weight > 0;
    }
  }
  case FamilyKind::MUL_BIT:
  {
    unsigned long long a = 0, b = 0;
    for ( long i = 0; i < spec.n; ++i )
    {
      if ( bit( i + 1 ) )
        a |= 1ull << i;
      if ( bit( spec.n + i + 1 ) )
        b |= 1ull << i;
    }
    long m = spec.tmpl.rule.resolve( spec.n );
    return ( ( a * b ) >> m ) & 1ull;
  }
  }
  return false;
}

namespace detail
{

/* Symmetric functions depend only on how many ones have been seen, so the
 * BDD is built by recursing over (level, ones-so-far) against the weight
 * value vector. */
inline NodeRef build_symmetric( BddManager& mgr, std::vector<std::uint8_t> const& weight_values )
{
  int const n = mgr.order().num_vars();
  // memo[level][ones]
  std::vector<std::vector<NodeRef>> memo( static_cast<std::size_t>( n ) + 1 );
  for ( int level = n; level >= 0; --level )
  {
    auto& row = memo[static_cast<std::size_t>( level )];
    row.resize( static_cast<std::size_t>( level ) + 1 );
    for ( int ones = 0; ones <= level; ++ones )
    {
      if ( level == n )
      {
        row[static_cast<std::size_t>( ones )] =
            weight_values[static_cast<std::size_t>( ones )] ? mgr.one() : mgr.zero();
      }
      else
      {
        auto const& next = memo[static_cast<std::size_t>( level ) + 1];
        NodeRef lo = next[static_cast<std::size_t>( ones )];
        NodeRef hi = next[static_cast<std::size_t>( ones ) + 1];
        row[static_cast<std::size_t>( ones )] =
            mgr.ite( mgr.var( mgr.order().variable_at( level ) ), hi, lo );
      }
    }
  }
  return memo[0][0];
}

/* Ripple-carry shift-add accumulation of partial products; returns the full
 * product bit vector (2n bits, LSB first). */
inline std::vector<NodeRef> build_product_bits( BddManager& mgr, long n )
{
  std::vector<NodeRef> acc( static_cast<std::size_t>( 2 * n ), mgr.zero() );
  for ( long j = 0; j < n; ++j )
  {
    NodeRef bj = mgr.var( static_cast<int>( n + j + 1 ) );
    NodeRef carry = mgr.zero();
    for ( long i = 0; i < n; ++i )
    {
      std::size_t pos = static_cast<std::size_t>( i + j );
      NodeRef pp = mgr.land( mgr.var( static_cast<int>( i + 1 ) ), bj );
      NodeRef sum = mgr.lxor( mgr.lxor( acc[pos], pp ), carry );
      carry = mgr.lor( mgr.land( acc[pos], pp ),
                       mgr.land( carry, mgr.lxor( acc[pos], pp ) ) );
      acc[pos] = sum;
    }
    for ( std::size_t pos = static_cast<std::size_t>( n + j );
          pos < acc.size() && !( carry == mgr.zero() ); ++pos )
    {
      NodeRef sum = mgr.lxor( acc[pos], carry );
      carry = mgr.land( acc[pos], carry );
      acc[pos] = sum;
    }
  }
  return acc;
}

} // namespace detail

/* Builds the family instance in mgr, whose order must match
 * resolve_order(spec). */
inline NodeRef build( FamilySpec const& spec, BddManager& mgr )
{
  if ( !( mgr.order() == resolve_order( spec ) ) )
    throw OrderError( "manager order does not match the family spec" );

  switch ( spec.family() )
  {
  case FamilyKind::F2_PAIRS:
  {
    NodeRef acc = mgr.zero();
    for ( long i = 1; i <= spec.n; ++i )
      acc = mgr.lor( acc, mgr.land( mgr.var( static_cast<int>( 2 * i - 1 ) ),
                                    mgr.var( static_cast<int>( 2 * i ) ) ) );
    return acc;
  }
  case FamilyKind::F3_TRIPLES:
  {
    NodeRef acc = mgr.zero();
    for ( long i = 1; i <= spec.n; ++i )
    {
      NodeRef term = mgr.land( mgr.var( static_cast<int>( 3 * i - 2 ) ),
                               mgr.land( mgr.var( static_cast<int>( 3 * i - 1 ) ),
                                         mgr.var( static_cast<int>( 3 * i ) ) ) );
      acc = mgr.lor( acc, term );
    }
    return acc;
  }
  case FamilyKind::SYM_EXACTLY:
  case FamilyKind::SYM_THRESHOLD:
  case FamilyKind::PARITY:
  case FamilyKind::ALL_AND:
  case FamilyKind::ALL_OR:
  {
    long const v = variable_count( spec );
    std::vector<std::uint8_t> values( static_cast<std::size_t>( v ) + 1, 0 );
    for ( long w = 0; w <= v; ++w )
    {
      bool on = false;
      switch ( spec.family() )
      {
      case FamilyKind::SYM_EXACTLY: on = ( w == spec.tmpl.rule.resolve( spec.n ) ); break;
      case FamilyKind::SYM_THRESHOLD: on = ( w >= spec.tmpl.rule.resolve( spec.n ) ); break;
      case FamilyKind::PARITY: on = ( w & 1 ) != 0; break;
      case FamilyKind::ALL_AND: on = ( w == v ); break;
      default: on = ( w > 0 ); break;
      }
      values[static_cast<std::size_t>( w )] = on ? 1 : 0;
    }
    return detail::build_symmetric( mgr, values );
  }
  case FamilyKind::MUL_BIT:
  {
    long m = spec.tmpl.rule.resolve( spec.n );
    if ( m < 0 || m >= 2 * spec.n )
      throw OrderError( "product bit " + std::to_string( m ) + " out of range" );
    return detail::build_product_bits( mgr, spec.n )[static_cast<std::size_t>( m )];
  }
  }
  throw OrderError( "unknown family" );
}

// ---------------------------------------------------------------------------
// Family string grammar:
//   FAMILY ::= KIND ['[' ('k'|'m') '=' RULE ']'] '@' ('k'|'n') ['=' INT] '/' PRESET
//   RULE   ::= INT | 'HALF' | 'n-1'
//   PRESET ::= NATURAL | F2_SPLIT | MUL_INTERLEAVED | MUL_BLOCKED | REVERSED
//            | EXPLICIT '(' INT (',' INT)* ')'
// e.g. "F2@k=8/NATURAL", "MUL_BIT[m=n-1]@n=6/MUL_BLOCKED"
// ---------------------------------------------------------------------------

struct ParsedFamily
{
  FamilyTemplate tmpl;
  bool has_n = false;
  long n = 0;
};

struct FamilySyntaxError : std::runtime_error
{
  using std::runtime_error::runtime_error;
};

namespace detail
{

inline long parse_long( std::string_view s, std::string const& what )
{
  long value = 0;
  auto [ptr, ec] = std::from_chars( s.data(), s.data() + s.size(), value );
  if ( ec != std::errc{} || ptr != s.data() + s.size() )
    throw FamilySyntaxError( "bad integer in " + what + ": '" + std::string( s ) + "'" );
  return value;
}

inline ParamRule parse_rule( std::string_view s )
{
  if ( s == "HALF" )
    return ParamRule{ ParamRule::Kind::HALF, 0 };
  if ( s == "n-1" || s == "N-1" )
    return ParamRule{ ParamRule::Kind::N_MINUS_1, 0 };
  return ParamRule{ ParamRule::Kind::CONST, parse_long( s, "parameter rule" ) };
}

} // namespace detail

inline ParsedFamily parse_family( std::string_view text )
{
  ParsedFamily out;
  auto at = text.find( '@' );
  if ( at == std::string_view::npos )
    throw FamilySyntaxError( "missing '@' in family string '" + std::string( text ) + "'" );
  auto slash = text.find( '/', at );
  if ( slash == std::string_view::npos )
    throw FamilySyntaxError( "missing '/ordering' in family string" );

  std::string_view head = text.substr( 0, at );
  std::string_view param = text.substr( at + 1, slash - at - 1 );
  std::string_view preset = text.substr( slash + 1 );

  // optional [x=rule] suffix on the family id
  if ( auto lb = head.find( '[' ); lb != std::string_view::npos )
  {
    if ( head.back() != ']' )
      throw FamilySyntaxError( "unterminated '[' in family id" );
    std::string_view inner = head.substr( lb + 1, head.size() - lb - 2 );
    auto eq = inner.find( '=' );
    if ( eq == std::string_view::npos )
      throw FamilySyntaxError( "expected 'k=...' or 'm=...' inside brackets" );
    out.tmpl.rule = detail::parse_rule( inner.substr( eq + 1 ) );
    head = head.substr( 0, lb );
  }
  else
  {
    out.tmpl.rule = ParamRule{ ParamRule::Kind::N_MINUS_1, 0 };
  }

  if ( head == "F2" )
    out.tmpl.family = FamilyKind::F2_PAIRS;
  else if ( head == "F3" )
    out.tmpl.family = FamilyKind::F3_TRIPLES;
  else if ( head == "SYM_EXACTLY" )
    out.tmpl.family = FamilyKind::SYM_EXACTLY;
  else if ( head == "SYM_THRESHOLD" )
    out.tmpl.family = FamilyKind::SYM_THRESHOLD;
  else if ( head == "PARITY" )
    out.tmpl.family = FamilyKind::PARITY;
  else if ( head == "ALL_AND" )
    out.tmpl.family = FamilyKind::ALL_AND;
  else if ( head == "ALL_OR" )
    out.tmpl.family = FamilyKind::ALL_OR;
  else if ( head == "MUL_BIT" )
    out.tmpl.family = FamilyKind::MUL_BIT;
  else
    throw FamilySyntaxError( "unknown family id '" + std::string( head ) + "'" );

  // symmetric families default to the HALF rule when brackets are omitted
  if ( ( out.tmpl.family == FamilyKind::SYM_EXACTLY ||
         out.tmpl.family == FamilyKind::SYM_THRESHOLD ) &&
       text.find( '[' ) == std::string_view::npos )
    out.tmpl.rule = ParamRule{ ParamRule::Kind::HALF, 0 };

  // parameter: 'k' or 'n', optionally with a value
  if ( auto eq = param.find( '=' ); eq != std::string_view::npos )
  {
    out.has_n = true;
    out.n = detail::parse_long( param.substr( eq + 1 ), "parameter" );
    param = param.substr( 0, eq );
  }
  if ( param != "k" && param != "n" )
    throw FamilySyntaxError( "parameter symbol must be 'k' or 'n'" );

  if ( preset == "NATURAL" )
    out.tmpl.ordering.kind = OrderingPreset::Kind::NATURAL;
  else if ( preset == "F2_SPLIT" )
    out.tmpl.ordering.kind = OrderingPreset::Kind::F2_SPLIT;
  else if ( preset == "MUL_INTERLEAVED" )
    out.tmpl.ordering.kind = OrderingPreset::Kind::MUL_INTERLEAVED;
  else if ( preset == "MUL_BLOCKED" )
    out.tmpl.ordering.kind = OrderingPreset::Kind::MUL_BLOCKED;
  else if ( preset == "REVERSED" )
    out.tmpl.ordering.kind = OrderingPreset::Kind::REVERSED;
  else if ( preset.starts_with( "EXPLICIT(" ) && preset.ends_with( ")" ) )
  {
    out.tmpl.ordering.kind = OrderingPreset::Kind::EXPLICIT;
    std::string inner( preset.substr( 9, preset.size() - 10 ) );
    std::stringstream ss( inner );
    std::string item;
    while ( std::getline( ss, item, ',' ) )
      out.tmpl.ordering.explicit_order.push_back(
          static_cast<int>( detail::parse_long( item, "explicit order" ) ) );
  }
  else
    throw FamilySyntaxError( "unknown ordering preset '" + std::string( preset ) + "'" );

  return out;
}

inline std::string param_symbol( FamilyKind kind )
{
  return ( kind == FamilyKind::F2_PAIRS || kind == FamilyKind::F3_TRIPLES ) ? "k" : "n";
}

inline std::string format_family( FamilyTemplate const& tmpl, long const* n = nullptr )
{
  std::string s = family_kind_name( tmpl.family );
  if ( tmpl.has_rule() )
  {
    s += '[';
    s += ( tmpl.family == FamilyKind::MUL_BIT ) ? 'm' : 'k';
    s += '=';
    s += tmpl.rule.to_string();
    s += ']';
  }
  s += '@';
  s += param_symbol( tmpl.family );
  if ( n )
    s += "=" + std::to_string( *n );
  s += '/';
  s += tmpl.ordering.to_string();
  return s;
}

} // namespace pfv
