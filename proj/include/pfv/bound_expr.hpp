#pragma once

#include "errors.hpp"

#include <cctype>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace pfv
{

/* Integer bound expressions over the family parameter:
 *   expr   := term (('+'|'-') term)*
 *   term   := factor ('*' factor)*
 *   factor := INT | 'n' | 'n' '^' INT | INT '^' 'n' | '(' expr ')'
 * 'k' is accepted as an alias for 'n'.  Evaluation is exact 64-bit integer
 * arithmetic; anything past 2^63-1 raises EvalOverflow and a negative final
 * value raises NegativeBound. */
class BoundExpr
{
public:
  static BoundExpr parse( std::string_view text )
  {
    Parser parser{ text };
    BoundExpr expr;
    expr.text_.assign( text );
    expr.root_ = parser.parse_expr( expr.nodes_ );
    parser.skip_ws();
    if ( parser.pos != text.size() )
      throw ParseError( "trailing input", parser.pos );
    return expr;
  }

  long long evaluate( long n ) const
  {
    if ( n < 1 )
      throw NegativeBound( "parameter must be >= 1" );
    long long v = eval_node( root_, n );
    if ( v < 0 )
      throw NegativeBound( text_ + " is negative at n=" + std::to_string( n ) );
    return v;
  }

  /* Syntactic degree in n; exponential constructs report true via
   * has_exponential instead. */
  int degree() const { return node_degree( root_ ); }

  bool has_exponential() const
  {
    for ( auto const& node : nodes_ )
      if ( node.kind == Kind::EXP_POW )
        return true;
    return false;
  }

  std::string const& text() const { return text_; }

  /* Tree equality; ignores the surface text, so "3*k+1" equals "3*n+1". */
  bool same_tree( BoundExpr const& other ) const
  {
    return node_equal( root_, other, other.root_ );
  }

private:
  enum class Kind
  {
    LITERAL,
    PARAM,
    ADD,
    SUB,
    MUL,
    PARAM_POW, // n^value
    EXP_POW    // value^n
  };

  struct Node
  {
    Kind kind;
    long long value = 0;
    int lhs = -1;
    int rhs = -1;
  };

  struct Parser
  {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws()
    {
      while ( pos < text.size() && std::isspace( static_cast<unsigned char>( text[pos] ) ) )
        ++pos;
    }

    bool peek( char c )
    {
      skip_ws();
      return pos < text.size() && text[pos] == c;
    }

    bool accept( char c )
    {
      if ( peek( c ) )
      {
        ++pos;
        return true;
      }
      return false;
    }

    long long parse_int()
    {
      skip_ws();
      std::size_t start = pos;
      while ( pos < text.size() && std::isdigit( static_cast<unsigned char>( text[pos] ) ) )
        ++pos;
      if ( pos == start )
        throw ParseError( "expected integer", pos );
      long long v = 0;
      for ( std::size_t i = start; i < pos; ++i )
      {
        if ( v > ( std::numeric_limits<long long>::max() - ( text[i] - '0' ) ) / 10 )
          throw ParseError( "integer literal too large", start );
        v = v * 10 + ( text[i] - '0' );
      }
      return v;
    }

    int parse_expr( std::vector<Node>& nodes )
    {
      int lhs = parse_term( nodes );
      for ( ;; )
      {
        if ( accept( '+' ) )
          lhs = add_node( nodes, { Kind::ADD, 0, lhs, parse_term( nodes ) } );
        else if ( accept( '-' ) )
          lhs = add_node( nodes, { Kind::SUB, 0, lhs, parse_term( nodes ) } );
        else
          return lhs;
      }
    }

    int parse_term( std::vector<Node>& nodes )
    {
      int lhs = parse_factor( nodes );
      while ( accept( '*' ) )
        lhs = add_node( nodes, { Kind::MUL, 0, lhs, parse_factor( nodes ) } );
      return lhs;
    }

    int parse_factor( std::vector<Node>& nodes )
    {
      skip_ws();
      if ( pos >= text.size() )
        throw ParseError( "unexpected end of expression", pos );
      char c = text[pos];
      if ( c == '(' )
      {
        ++pos;
        int inner = parse_expr( nodes );
        if ( !accept( ')' ) )
          throw ParseError( "expected ')'", pos );
        return inner;
      }
      if ( c == 'n' || c == 'k' )
      {
        ++pos;
        if ( accept( '^' ) )
        {
          long long d = parse_int();
          return add_node( nodes, { Kind::PARAM_POW, d, -1, -1 } );
        }
        return add_node( nodes, { Kind::PARAM, 0, -1, -1 } );
      }
      if ( std::isdigit( static_cast<unsigned char>( c ) ) )
      {
        long long v = parse_int();
        if ( accept( '^' ) )
        {
          skip_ws();
          if ( pos >= text.size() || ( text[pos] != 'n' && text[pos] != 'k' ) )
            throw ParseError( "expected 'n' after '^'", pos );
          ++pos;
          return add_node( nodes, { Kind::EXP_POW, v, -1, -1 } );
        }
        return add_node( nodes, { Kind::LITERAL, v, -1, -1 } );
      }
      throw ParseError( std::string( "unexpected character '" ) + c + "'", pos );
    }

    static int add_node( std::vector<Node>& nodes, Node node )
    {
      nodes.push_back( node );
      return static_cast<int>( nodes.size() ) - 1;
    }
  };

  static long long checked( __int128 v )
  {
    if ( v > std::numeric_limits<long long>::max() || v < -static_cast<__int128>( std::numeric_limits<long long>::max() ) )
      throw EvalOverflow( "value exceeds 2^63-1" );
    return static_cast<long long>( v );
  }

  long long eval_node( int idx, long n ) const
  {
    Node const& node = nodes_[static_cast<std::size_t>( idx )];
    switch ( node.kind )
    {
    case Kind::LITERAL: return node.value;
    case Kind::PARAM: return n;
    case Kind::ADD:
      return checked( static_cast<__int128>( eval_node( node.lhs, n ) ) + eval_node( node.rhs, n ) );
    case Kind::SUB:
      return checked( static_cast<__int128>( eval_node( node.lhs, n ) ) - eval_node( node.rhs, n ) );
    case Kind::MUL:
      return checked( static_cast<__int128>( eval_node( node.lhs, n ) ) * eval_node( node.rhs, n ) );
    case Kind::PARAM_POW:
    {
      __int128 v = 1;
      for ( long long i = 0; i < node.value; ++i )
        v = static_cast<__int128>( checked( v * n ) );
      return checked( v );
    }
    case Kind::EXP_POW:
    {
      __int128 v = 1;
      for ( long i = 0; i < n; ++i )
        v = static_cast<__int128>( checked( v * node.value ) );
      return checked( v );
    }
    }
    throw EvalOverflow( "unreachable" );
  }

  int node_degree( int idx ) const
  {
    Node const& node = nodes_[static_cast<std::size_t>( idx )];
    switch ( node.kind )
    {
    case Kind::LITERAL: return 0;
    case Kind::PARAM: return 1;
    case Kind::ADD:
    case Kind::SUB: return std::max( node_degree( node.lhs ), node_degree( node.rhs ) );
    case Kind::MUL:
    {
      long long d = static_cast<long long>( node_degree( node.lhs ) ) + node_degree( node.rhs );
      return d > std::numeric_limits<int>::max() ? std::numeric_limits<int>::max()
                                                 : static_cast<int>( d );
    }
    case Kind::PARAM_POW: return static_cast<int>( node.value );
    case Kind::EXP_POW: return std::numeric_limits<int>::max();
    }
    return 0;
  }

  bool node_equal( int idx, BoundExpr const& other, int other_idx ) const
  {
    Node const& a = nodes_[static_cast<std::size_t>( idx )];
    Node const& b = other.nodes_[static_cast<std::size_t>( other_idx )];
    if ( a.kind != b.kind || a.value != b.value )
      return false;
    if ( a.lhs >= 0 && !node_equal( a.lhs, other, b.lhs ) )
      return false;
    if ( a.rhs >= 0 && !node_equal( a.rhs, other, b.rhs ) )
      return false;
    return true;
  }

  std::vector<Node> nodes_;
  int root_ = -1;
  std::string text_;
};

} // namespace pfv
