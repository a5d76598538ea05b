#include "gwlab/tree_io.hpp"

#include <charconv>
#include <sstream>

#include "gwlab/errors.hpp"

namespace gwlab {

namespace {

constexpr const char* kLukHeader = "LUK v1\n";
constexpr const char* kParenHeader = "PAREN v1\n";
constexpr const char* kSinHeader = "SIN v1\n";

// Byte cursor over the serialized text; keeps absolute offsets for errors.
struct Cursor {
    const std::string& text;
    std::size_t pos = 0;

    bool eof() const { return pos >= text.size(); }
    char peek() const { return text[pos]; }

    void expect_literal(const char* literal) {
        const std::size_t start = pos;
        for (const char* c = literal; *c; ++c, ++pos) {
            if (eof() || text[pos] != *c) throw ParseError(std::string("'") + literal + "'", start);
        }
    }

    void skip_spaces() {
        while (!eof() && text[pos] == ' ') ++pos;
    }

    std::int64_t read_int() {
        skip_spaces();
        std::int64_t value = 0;
        const auto [ptr, ec] =
            std::from_chars(text.data() + pos, text.data() + text.size(), value);
        if (ec != std::errc{}) throw ParseError("integer", pos);
        pos = static_cast<std::size_t>(ptr - text.data());
        return value;
    }

    void expect_newline() {
        if (eof() || text[pos] != '\n') throw ParseError("newline", pos);
        ++pos;
    }
};

OrderedTree::Kids read_counts_until(Cursor& cur, char terminator) {
    OrderedTree::Kids kids;
    for (;;) {
        cur.skip_spaces();
        if (cur.eof()) throw ParseError(std::string("'") + terminator + "'", cur.pos);
        if (cur.peek() == terminator) break;
        const std::int64_t v = cur.read_int();
        if (v < 0) throw ParseError("nonnegative child count", cur.pos);
        kids.push_back(static_cast<std::int32_t>(v));
    }
    return kids;
}

}  // namespace

std::string to_luk(const OrderedTree& t) {
    std::ostringstream os;
    os << "LUK v1\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) os << ' ';
        os << t.kids()[i];
    }
    os << '\n';
    return os.str();
}

OrderedTree from_luk(const std::string& text) {
    Cursor cur{text};
    cur.expect_literal(kLukHeader);
    auto kids = read_counts_until(cur, '\n');
    cur.expect_newline();
    if (kids.empty()) throw ParseError("at least one child count", cur.pos);
    return OrderedTree::from_kids(std::move(kids));
}

std::string to_paren(const OrderedTree& t) {
    const auto h = t.heights();
    std::string body;
    for (std::size_t i = 1; i < t.size(); ++i) {
        body += '(';
        const std::int32_t next = i + 1 < t.size() ? h[i + 1] : 1;
        for (std::int32_t c = 0; c < h[i] - next + 1; ++c) body += ')';
    }
    return std::string(kParenHeader) + body + "\n";
}

OrderedTree from_paren(const std::string& text) {
    Cursor cur{text};
    cur.expect_literal(kParenHeader);
    OrderedTree::Kids kids{0};  // root placeholder at index 0
    std::vector<std::size_t> open;
    while (!cur.eof() && cur.peek() != '\n') {
        if (cur.peek() == '(') {
            if (open.empty()) {
                kids[0] += 1;
            } else {
                kids[open.back()] += 1;
            }
            kids.push_back(0);
            open.push_back(kids.size() - 1);
        } else if (cur.peek() == ')') {
            if (open.empty()) throw ParseError("balanced parentheses", cur.pos);
            open.pop_back();
        } else {
            throw ParseError("'(' or ')'", cur.pos);
        }
        ++cur.pos;
    }
    if (!open.empty()) throw ParseError("')' closing every '('", cur.pos);
    cur.expect_newline();
    return OrderedTree::from_kids(std::move(kids));
}

std::string to_sin(const SinTree& t) {
    std::ostringstream os;
    os << "SIN v1\n";
    for (const auto& g : t.generations()) {
        os << g.k << ' ' << g.j << '\n';
        const auto emit = [&os](const OrderedTree& bush) {
            os << '[';
            for (std::size_t i = 0; i < bush.size(); ++i) {
                if (i) os << ' ';
                os << bush.kids()[i];
            }
            os << "]\n";
        };
        for (const auto& b : g.left) emit(b);
        for (const auto& b : g.right) emit(b);
    }
    return os.str();
}

SinTree from_sin(const std::string& text) {
    Cursor cur{text};
    cur.expect_literal(kSinHeader);
    std::vector<SinTree::Generation> gens;
    while (!cur.eof()) {
        SinTree::Generation g;
        const std::int64_t k = cur.read_int();
        const std::int64_t j = cur.read_int();
        if (k < 1 || j < 1 || j > k) throw ParseError("spine marks with 1 <= j <= k", cur.pos);
        g.k = static_cast<std::int32_t>(k);
        g.j = static_cast<std::int32_t>(j);
        cur.skip_spaces();
        cur.expect_newline();
        for (std::int64_t b = 0; b < k - 1; ++b) {
            cur.skip_spaces();
            if (cur.eof() || cur.peek() != '[') throw ParseError("'[' opening a bush payload", cur.pos);
            ++cur.pos;
            auto kids = read_counts_until(cur, ']');
            ++cur.pos;  // consume ']'
            cur.expect_newline();
            if (kids.empty()) throw ParseError("nonempty bush payload", cur.pos);
            auto bush = OrderedTree::from_kids(std::move(kids));
            if (b < j - 1) {
                g.left.push_back(std::move(bush));
            } else {
                g.right.push_back(std::move(bush));
            }
        }
        gens.push_back(std::move(g));
    }
    return SinTree::from_generations(std::move(gens));
}

OrderedTree tree_from_text(const std::string& text) {
    if (text.rfind(kLukHeader, 0) == 0) return from_luk(text);
    if (text.rfind(kParenHeader, 0) == 0) return from_paren(text);
    throw ParseError("'LUK v1' or 'PAREN v1' header", 0);
}

}  // namespace gwlab
