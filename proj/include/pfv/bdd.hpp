#pragma once

#include "errors.hpp"

#include <atomic>
#include <cstdint>
#include <numeric>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace pfv
{

/* Fixed variable order for one manager.  Variables are 1-based; levels are
 * 0-based from the root. */
class VarOrder
{
public:
  explicit VarOrder( std::vector<int> variables )
      : vars_( std::move( variables ) )
  {
    int max_var = 0;
    for ( int v : vars_ )
    {
      if ( v < 1 )
        throw OrderError( "variable index " + std::to_string( v ) + " is not positive" );
      max_var = std::max( max_var, v );
    }
    level_of_.assign( static_cast<std::size_t>( max_var ) + 1, -1 );
    for ( std::size_t level = 0; level < vars_.size(); ++level )
    {
      int v = vars_[level];
      if ( level_of_[static_cast<std::size_t>( v )] != -1 )
        throw OrderError( "duplicate variable index " + std::to_string( v ) );
      level_of_[static_cast<std::size_t>( v )] = static_cast<int>( level );
    }
    if ( max_var != static_cast<int>( vars_.size() ) )
      throw OrderError( "order is not a permutation of 1.." + std::to_string( vars_.size() ) );
  }

  int num_vars() const { return static_cast<int>( vars_.size() ); }

  int variable_at( int level ) const { return vars_.at( static_cast<std::size_t>( level ) ); }

  bool contains( int var ) const
  {
    return var >= 1 && var < static_cast<int>( level_of_.size() ) &&
           level_of_[static_cast<std::size_t>( var )] >= 0;
  }

  int level_of( int var ) const
  {
    if ( !contains( var ) )
      throw OrderError( "variable " + std::to_string( var ) + " is not in the order" );
    return level_of_[static_cast<std::size_t>( var )];
  }

  std::vector<int> const& variables() const { return vars_; }

  bool operator==( VarOrder const& other ) const { return vars_ == other.vars_; }

private:
  std::vector<int> vars_;
  std::vector<int> level_of_;
};

class BddManager;

/* Opaque node handle.  Carries the owning manager's id so foreign handles
 * are rejected instead of silently misinterpreted. */
class NodeRef
{
public:
  NodeRef() = default;

  bool operator==( NodeRef const& other ) const = default;

  bool is_constant() const { return index_ < 2; }

private:
  friend class BddManager;
  friend struct NodeRefHash;

  NodeRef( std::uint32_t index, std::uint32_t mgr_id )
      : index_( index ), mgr_id_( mgr_id )
  {
  }

  std::uint32_t index_ = 0;
  std::uint32_t mgr_id_ = 0;
};

struct NodeRefHash
{
  std::size_t operator()( NodeRef const& r ) const
  {
    return std::hash<std::uint64_t>{}( ( std::uint64_t( r.mgr_id_ ) << 32 ) | r.index_ );
  }
};

/* Internal node counts per level, root level first. */
struct LevelProfile
{
  std::vector<std::size_t> counts;

  std::size_t total() const
  {
    return std::accumulate( counts.begin(), counts.end(), std::size_t{ 0 } );
  }

  bool operator==( LevelProfile const& other ) const = default;
};

enum class BoolOp : std::uint8_t
{
  AND,
  OR,
  XOR
};

/* Hash-consed reduced ordered BDD store with an unbounded apply cache.
 * Managers are cheap and meant to be discarded per measurement; there is no
 * garbage collection.  Single-threaded per instance. */
class BddManager
{
public:
  explicit BddManager( VarOrder order, std::size_t node_limit = 0 )
      : order_( std::move( order ) ), id_( next_id() ), node_limit_( node_limit )
  {
    // terminals live at indices 0 and 1 with a sentinel level past the last variable
    nodes_.push_back( { terminal_var(), 0u, 0u } );
    nodes_.push_back( { terminal_var(), 1u, 1u } );
  }

  BddManager( BddManager const& ) = delete;
  BddManager& operator=( BddManager const& ) = delete;

  VarOrder const& order() const { return order_; }

  NodeRef zero() const { return NodeRef( 0, id_ ); }
  NodeRef one() const { return NodeRef( 1, id_ ); }

  NodeRef var( int i )
  {
    if ( !order_.contains( i ) )
      throw OrderError( "variable " + std::to_string( i ) + " is not in the order" );
    return NodeRef( make_node( i, 0, 1 ), id_ );
  }

  /* Boolean combination via Shannon decomposition on the top variable.
   * Explicit work stack instead of recursion so orders with thousands of
   * variables do not exhaust the call stack. */
  NodeRef apply( BoolOp op, NodeRef f, NodeRef g )
  {
    check_owned( f );
    check_owned( g );
    return NodeRef( apply_rec( op, f.index_, g.index_ ), id_ );
  }

  NodeRef land( NodeRef f, NodeRef g ) { return apply( BoolOp::AND, f, g ); }
  NodeRef lor( NodeRef f, NodeRef g ) { return apply( BoolOp::OR, f, g ); }
  NodeRef lxor( NodeRef f, NodeRef g ) { return apply( BoolOp::XOR, f, g ); }

  NodeRef complement( NodeRef f ) { return apply( BoolOp::XOR, f, one() ); }

  NodeRef ite( NodeRef c, NodeRef t, NodeRef e )
  {
    return lor( land( c, t ), land( complement( c ), e ) );
  }

  /* f with variable i fixed to value; the result never tests i. */
  NodeRef cofactor( NodeRef f, int i, bool value )
  {
    check_owned( f );
    int target_level = order_.level_of( i );
    std::unordered_map<std::uint32_t, std::uint32_t> memo;
    return NodeRef( cofactor_rec( f.index_, target_level, value, memo ), id_ );
  }

  bool eval( NodeRef f, std::unordered_map<int, bool> const& assignment ) const
  {
    check_owned( f );
    for ( int v : order_.variables() )
    {
      if ( !assignment.count( v ) )
        throw AssignmentError( "assignment misses variable " + std::to_string( v ) );
    }
    std::uint32_t cur = f.index_;
    while ( cur > 1 )
    {
      Node const& node = nodes_[cur];
      cur = assignment.at( node.var ) ? node.high : node.low;
    }
    return cur == 1;
  }

  /* Number of distinct non-constant nodes reachable from f.  Terminals are
   * excluded everywhere in this project. */
  std::size_t internal_node_count( NodeRef f ) const { return level_profile( f ).total(); }

  LevelProfile level_profile( NodeRef f ) const
  {
    check_owned( f );
    LevelProfile profile;
    profile.counts.assign( static_cast<std::size_t>( order_.num_vars() ), 0 );
    std::unordered_set<std::uint32_t> visited;
    std::vector<std::uint32_t> stack{ f.index_ };
    while ( !stack.empty() )
    {
      std::uint32_t cur = stack.back();
      stack.pop_back();
      if ( cur < 2 || !visited.insert( cur ).second )
        continue;
      Node const& node = nodes_[cur];
      ++profile.counts[static_cast<std::size_t>( order_.level_of( node.var ) )];
      stack.push_back( node.low );
      stack.push_back( node.high );
    }
    return profile;
  }

  /* Total nodes ever created, terminals excluded. */
  std::size_t live_node_count() const { return nodes_.size() - 2; }

private:
  struct Node
  {
    int var;
    std::uint32_t low;
    std::uint32_t high;
  };

  struct TripleHash
  {
    std::size_t operator()( std::tuple<int, std::uint32_t, std::uint32_t> const& t ) const
    {
      std::uint64_t h = std::uint64_t( std::get<0>( t ) ) * 0x9e3779b97f4a7c15ull;
      h ^= std::uint64_t( std::get<1>( t ) ) + 0x9e3779b9 + ( h << 6 ) + ( h >> 2 );
      h ^= std::uint64_t( std::get<2>( t ) ) + 0x9e3779b9 + ( h << 6 ) + ( h >> 2 );
      return static_cast<std::size_t>( h );
    }
  };

  struct CacheKeyHash
  {
    std::size_t operator()( std::tuple<std::uint8_t, std::uint32_t, std::uint32_t> const& t ) const
    {
      std::uint64_t h = std::get<0>( t );
      h = h * 0x100000001b3ull ^ std::get<1>( t );
      h = h * 0x100000001b3ull ^ std::get<2>( t );
      return static_cast<std::size_t>( h );
    }
  };

  static std::uint32_t next_id()
  {
    static std::atomic<std::uint32_t> counter{ 1 };
    return counter.fetch_add( 1 );
  }

  int terminal_var() const { return order_.num_vars() + 1; }

  int level_of_node( std::uint32_t idx ) const
  {
    return idx < 2 ? order_.num_vars() : order_.level_of( nodes_[idx].var );
  }

  void check_owned( NodeRef r ) const
  {
    if ( r.mgr_id_ != id_ )
      throw ManagerMismatch( "node handle belongs to a different manager" );
  }

  std::uint32_t make_node( int var, std::uint32_t low, std::uint32_t high )
  {
    if ( low == high )
      return low;
    auto key = std::make_tuple( var, low, high );
    auto it = unique_.find( key );
    if ( it != unique_.end() )
      return it->second;
    if ( node_limit_ != 0 && nodes_.size() - 2 >= node_limit_ )
      throw NodeBudgetError( "node cap of " + std::to_string( node_limit_ ) + " exceeded" );
    auto idx = static_cast<std::uint32_t>( nodes_.size() );
    nodes_.push_back( { var, low, high } );
    unique_.emplace( key, idx );
    return idx;
  }

  static std::optional<std::uint32_t> terminal_case( BoolOp op, std::uint32_t f, std::uint32_t g )
  {
    switch ( op )
    {
    case BoolOp::AND:
      if ( f == 0 || g == 0 )
        return 0u;
      if ( f == 1 )
        return g;
      if ( g == 1 )
        return f;
      if ( f == g )
        return f;
      break;
    case BoolOp::OR:
      if ( f == 1 || g == 1 )
        return 1u;
      if ( f == 0 )
        return g;
      if ( g == 0 )
        return f;
      if ( f == g )
        return f;
      break;
    case BoolOp::XOR:
      if ( f == 0 )
        return g;
      if ( g == 0 )
        return f;
      if ( f == g )
        return 0u;
      break;
    }
    return std::nullopt;
  }

  std::uint32_t apply_rec( BoolOp op, std::uint32_t f_root, std::uint32_t g_root )
  {
    struct Frame
    {
      std::uint32_t f;
      std::uint32_t g;
      std::uint32_t low_result;
      std::uint8_t stage;
    };

    std::vector<Frame> stack;
    stack.push_back( { f_root, g_root, 0, 0 } );
    std::uint32_t result = 0;

    while ( !stack.empty() )
    {
      Frame& fr = stack.back();
      if ( fr.stage == 0 )
      {
        if ( auto t = terminal_case( op, fr.f, fr.g ) )
        {
          result = *t;
          stack.pop_back();
          continue;
        }
        // all three operators are commutative
        if ( fr.f > fr.g )
          std::swap( fr.f, fr.g );
        auto key = std::make_tuple( static_cast<std::uint8_t>( op ), fr.f, fr.g );
        if ( auto it = cache_.find( key ); it != cache_.end() )
        {
          result = it->second;
          stack.pop_back();
          continue;
        }
        fr.stage = 1;
        auto [fl, gl] = child_pair( fr.f, fr.g, false );
        stack.push_back( { fl, gl, 0, 0 } );
      }
      else if ( fr.stage == 1 )
      {
        fr.low_result = result;
        fr.stage = 2;
        auto [fh, gh] = child_pair( fr.f, fr.g, true );
        stack.push_back( { fh, gh, 0, 0 } );
      }
      else
      {
        int top_var = top_variable( fr.f, fr.g );
        result = make_node( top_var, fr.low_result, result );
        cache_.emplace( std::make_tuple( static_cast<std::uint8_t>( op ), fr.f, fr.g ), result );
        stack.pop_back();
      }
    }
    return result;
  }

  int top_variable( std::uint32_t f, std::uint32_t g ) const
  {
    int lf = level_of_node( f );
    int lg = level_of_node( g );
    return order_.variable_at( std::min( lf, lg ) );
  }

  std::pair<std::uint32_t, std::uint32_t> child_pair( std::uint32_t f, std::uint32_t g, bool high ) const
  {
    int top = std::min( level_of_node( f ), level_of_node( g ) );
    auto branch = [&]( std::uint32_t h ) {
      if ( level_of_node( h ) != top )
        return h;
      Node const& node = nodes_[h];
      return high ? node.high : node.low;
    };
    return { branch( f ), branch( g ) };
  }

  std::uint32_t cofactor_rec( std::uint32_t f, int target_level, bool value,
                              std::unordered_map<std::uint32_t, std::uint32_t>& memo )
  {
    int level = level_of_node( f );
    if ( level > target_level )
      return f;
    if ( level == target_level )
      return value ? nodes_[f].high : nodes_[f].low;
    if ( auto it = memo.find( f ); it != memo.end() )
      return it->second;
    Node const& node = nodes_[f];
    std::uint32_t low = cofactor_rec( node.low, target_level, value, memo );
    std::uint32_t high = cofactor_rec( node.high, target_level, value, memo );
    std::uint32_t r = make_node( node.var, low, high );
    memo.emplace( f, r );
    return r;
  }

  VarOrder order_;
  std::uint32_t id_;
  std::size_t node_limit_;
  std::vector<Node> nodes_;
  std::unordered_map<std::tuple<int, std::uint32_t, std::uint32_t>, std::uint32_t, TripleHash> unique_;
  std::unordered_map<std::tuple<std::uint8_t, std::uint32_t, std::uint32_t>, std::uint32_t, CacheKeyHash> cache_;
};

} // namespace pfv
