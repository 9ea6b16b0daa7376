#ifndef CSYNC_TEXT_FORMAT_HPP
#define CSYNC_TEXT_FORMAT_HPP

#include <string>
#include <string_view>

#include "csync/automata.hpp"

namespace csync {

// Line-oriented automaton format:
//
//   alphabet a b
//   states 3
//   initial 1
//   final 3
//   trans 1 a 2
//
// `#` starts a comment. Errors are reported as InputError with the line
// number.
Pdfa parse_pdfa(std::string_view text);
Dcsa parse_dcsa(std::string_view text);
Pdfa load_pdfa(const std::string& path);
Dcsa load_dcsa(const std::string& path);

// `header` lines are emitted as `#` comments before the automaton.
std::string to_text(const Pdfa& b, std::string_view header = {});
std::string to_text(const Dcsa& a, std::string_view header = {});
std::string to_dot(const Pdfa& b);

// Regular expressions in the notation used throughout the tests and the
// knowledge base: `+` is union, juxtaposition is concatenation, `*` is
// Kleene star, `^+` is Kleene plus, `()` is the empty word, `0` is the empty
// language. Letters are single characters of the alphabet.
Pdfa from_regex(std::string_view expr, const Alphabet& alphabet);

}  // namespace csync

#endif
