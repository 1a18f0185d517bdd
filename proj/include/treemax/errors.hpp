// treemax: error taxonomy.
//
// Every failure the library can signal carries a code so the CLI can map it
// onto its documented exit codes: bad usage/config (2), vertex cap exceeded
// (3), window too small for a certified answer (4), everything else (1).
#pragma once

#include <stdexcept>
#include <string>

namespace treemax {

enum class Errc {
  bad_address,        // malformed or invalid vertex address
  bad_valence,        // valence < 3, uncovered height, malformed rule
  bad_function,       // malformed function file/spec, or support off-window
  bad_argument,       // other invalid call (p <= 0, alpha <= 0, ...)
  not_in_window,      // vertex/triangle/ball not materialized in the window
  vertex_cap,         // window build would exceed the vertex cap
  window_too_small,   // window cannot support a certified answer
  uncertified_input,  // operation requires certified values
  not_maximal,        // family is not an antichain under inclusion
  io_error,           // file cannot be opened, written, or renamed
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace treemax
