#pragma once

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "workbench/automaton.hpp"

namespace workbench {

// Line-oriented automaton format:
//   sda <base> <arity> <num_states> <initial>
//   t <state> <d1> ... <d_arity> <target>
// Transition lines may come in any order; the writer sorts by (state,
// letter) so equal automata serialize to identical bytes.
inline void save(const SafetyAutomaton& a, std::ostream& os) {
    os << "sda " << a.base() << ' ' << a.arity() << ' ' << a.num_states() << ' '
       << (a.is_empty_automaton() ? 0 : a.initial()) << '\n';
    for (int q = 0; q < a.num_states(); ++q)
        for (int l = 0; l < a.alphabet_size(); ++l) {
            int t = a.target(q, l);
            if (t < 0) continue;
            os << "t " << q;
            for (int d : a.decode_letter(l)) os << ' ' << d;
            os << ' ' << t << '\n';
        }
}

inline std::string to_text(const SafetyAutomaton& a) {
    std::ostringstream os;
    save(a, os);
    return os.str();
}

inline SafetyAutomaton load(std::istream& is, const std::string& name = "<input>") {
    auto fail = [&](int line, const std::string& msg) -> void {
        throw io_error(name + ":" + std::to_string(line) + ": " + msg);
    };
    std::string text_line;
    int line_no = 0;

    // header
    int base = 0, arity = 0, num_states = 0, initial = 0;
    while (std::getline(is, text_line)) {
        ++line_no;
        if (text_line.empty()) continue;
        std::istringstream ls(text_line);
        std::string tag;
        ls >> tag;
        if (tag != "sda") fail(line_no, "expected header line 'sda <base> <arity> <states> <initial>'");
        if (!(ls >> base >> arity >> num_states >> initial))
            fail(line_no, "malformed header");
        break;
    }
    if (base == 0) fail(line_no, "missing header");
    if (base < 2 || arity < 1 || num_states < 0)
        fail(line_no, "invalid base/arity/state count");

    SafetyAutomaton a(base, arity);
    for (int q = 0; q < num_states; ++q) a.add_state();
    if (num_states > 0) {
        if (initial < 0 || initial >= num_states) fail(line_no, "initial state out of range");
        a.set_initial(initial);
    }

    std::vector<int> digits(static_cast<std::size_t>(arity));
    while (std::getline(is, text_line)) {
        ++line_no;
        if (text_line.empty() || text_line[0] == '#') continue;
        std::istringstream ls(text_line);
        std::string tag;
        ls >> tag;
        if (tag.empty()) continue;
        if (tag != "t") fail(line_no, "expected transition line 't <state> <digits...> <target>'");
        int from = -1, to = -1;
        if (!(ls >> from)) fail(line_no, "malformed transition");
        for (int i = 0; i < arity; ++i)
            if (!(ls >> digits[static_cast<std::size_t>(i)])) fail(line_no, "missing digit");
        if (!(ls >> to)) fail(line_no, "missing target state");
        std::string extra;
        if (ls >> extra) fail(line_no, "trailing tokens");
        if (from < 0 || from >= num_states) fail(line_no, "source state out of range");
        if (to < 0 || to >= num_states) fail(line_no, "target state out of range");
        for (int d : digits)
            if (d < 0 || d >= base) fail(line_no, "digit out of range");
        int letter = a.encode_letter(digits);
        if (a.target(from, letter) >= 0) fail(line_no, "duplicate transition");
        a.set_transition(from, letter, to);
    }
    return a;
}

inline SafetyAutomaton load_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open '" + path + "'");
    return load(f, path);
}

inline void save_file(const SafetyAutomaton& a, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw io_error("cannot open '" + path + "' for writing");
    save(a, f);
}

// Reads only the header; used by the type checker to learn the shape of a
// load() expression without materializing the automaton twice.
inline std::pair<int, int> peek_shape(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw io_error("cannot open '" + path + "'");
    std::string tag;
    int base = 0, arity = 0;
    if (!(f >> tag >> base >> arity) || tag != "sda")
        throw io_error(path + ":1: expected header line 'sda <base> <arity> ...'");
    return {base, arity};
}

} // namespace workbench
