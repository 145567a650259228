#pragma once

// Porter (English) and Snowball (Italian) suffix-stripping stemmers.

#include <algorithm>
#include <span>
#include <string>
#include <string_view>

#include "brandpulse/utf8.hpp"

namespace brandpulse::stem {

namespace detail {

class Porter {
 public:
  explicit Porter(std::string word) : b_(std::move(word)), k_(static_cast<int>(b_.size()) - 1) {}

  std::string run() {
    if (k_ <= 1) return b_;
    step1ab();
    if (k_ > 0) {
      step1c();
      step2();
      step3();
      step4();
      step5();
    }
    return b_.substr(0, static_cast<std::size_t>(k_ + 1));
  }

 private:
  std::string b_;
  int k_;
  int j_ = 0;

  char at(int i) const { return b_[static_cast<std::size_t>(i)]; }

  bool cons(int i) const {
    switch (at(i)) {
      case 'a':
      case 'e':
      case 'i':
      case 'o':
      case 'u':
        return false;
      case 'y':
        return i == 0 ? true : !cons(i - 1);
      default:
        return true;
    }
  }

  // Number of VC sequences in b[0..j].
  int m() const {
    int n = 0;
    int i = 0;
    for (;;) {
      if (i > j_) return n;
      if (!cons(i)) break;
      ++i;
    }
    ++i;
    for (;;) {
      for (;;) {
        if (i > j_) return n;
        if (cons(i)) break;
        ++i;
      }
      ++i;
      ++n;
      for (;;) {
        if (i > j_) return n;
        if (!cons(i)) break;
        ++i;
      }
      ++i;
    }
  }

  bool vowel_in_stem() const {
    for (int i = 0; i <= j_; ++i) {
      if (!cons(i)) return true;
    }
    return false;
  }

  bool double_c(int j) const { return j >= 1 && at(j) == at(j - 1) && cons(j); }

  bool cvc(int i) const {
    if (i < 2 || !cons(i) || cons(i - 1) || !cons(i - 2)) return false;
    const char ch = at(i);
    return ch != 'w' && ch != 'x' && ch != 'y';
  }

  bool ends(std::string_view s) {
    const int len = static_cast<int>(s.size());
    if (len > k_ + 1) return false;
    if (std::string_view(b_).substr(static_cast<std::size_t>(k_ + 1 - len), s.size()) != s) return false;
    j_ = k_ - len;
    return true;
  }

  void set_to(std::string_view s) {
    b_.resize(static_cast<std::size_t>(j_ + 1));
    b_ += s;
    k_ = j_ + static_cast<int>(s.size());
  }

  void r(std::string_view s) {
    if (m() > 0) set_to(s);
  }

  void truncate() { b_.resize(static_cast<std::size_t>(k_ + 1)); }

  void step1ab() {
    if (at(k_) == 's') {
      if (ends("sses")) {
        k_ -= 2;
      } else if (ends("ies")) {
        set_to("i");
      } else if (at(k_ - 1) != 's') {
        --k_;
      }
      truncate();
    }
    if (ends("eed")) {
      if (m() > 0) --k_;
      truncate();
    } else if ((ends("ed") || ends("ing")) && vowel_in_stem()) {
      k_ = j_;
      truncate();
      if (ends("at")) {
        set_to("ate");
      } else if (ends("bl")) {
        set_to("ble");
      } else if (ends("iz")) {
        set_to("ize");
      } else if (double_c(k_)) {
        --k_;
        const char ch = at(k_);
        if (ch == 'l' || ch == 's' || ch == 'z') ++k_;
        truncate();
      } else {
        j_ = k_;
        if (m() == 1 && cvc(k_)) set_to("e");
      }
    }
  }

  void step1c() {
    if (ends("y") && vowel_in_stem()) b_[static_cast<std::size_t>(k_)] = 'i';
  }

  bool replace_any(std::initializer_list<std::pair<std::string_view, std::string_view>> rules) {
    for (const auto& [suffix, repl] : rules) {
      if (ends(suffix)) {
        r(repl);
        return true;
      }
    }
    return false;
  }

  void step2() {
    if (k_ < 1) return;
    switch (at(k_ - 1)) {
      case 'a':
        replace_any({{"ational", "ate"}, {"tional", "tion"}});
        break;
      case 'c':
        replace_any({{"enci", "ence"}, {"anci", "ance"}});
        break;
      case 'e':
        replace_any({{"izer", "ize"}});
        break;
      case 'l':
        replace_any({{"bli", "ble"}, {"alli", "al"}, {"entli", "ent"}, {"eli", "e"}, {"ousli", "ous"}});
        break;
      case 'o':
        replace_any({{"ization", "ize"}, {"ation", "ate"}, {"ator", "ate"}});
        break;
      case 's':
        replace_any({{"alism", "al"}, {"iveness", "ive"}, {"fulness", "ful"}, {"ousness", "ous"}});
        break;
      case 't':
        replace_any({{"aliti", "al"}, {"iviti", "ive"}, {"biliti", "ble"}});
        break;
      case 'g':
        replace_any({{"logi", "log"}});
        break;
      default:
        break;
    }
  }

  void step3() {
    switch (at(k_)) {
      case 'e':
        replace_any({{"icate", "ic"}, {"ative", ""}, {"alize", "al"}});
        break;
      case 'i':
        replace_any({{"iciti", "ic"}});
        break;
      case 'l':
        replace_any({{"ical", "ic"}, {"ful", ""}});
        break;
      case 's':
        replace_any({{"ness", ""}});
        break;
      default:
        break;
    }
  }

  void step4() {
    if (k_ < 1) return;
    auto any = [&](std::initializer_list<std::string_view> suffixes) {
      for (auto s : suffixes) {
        if (ends(s)) return true;
      }
      return false;
    };
    bool matched = false;
    switch (at(k_ - 1)) {
      case 'a':
        matched = any({"al"});
        break;
      case 'c':
        matched = any({"ance", "ence"});
        break;
      case 'e':
        matched = any({"er"});
        break;
      case 'i':
        matched = any({"ic"});
        break;
      case 'l':
        matched = any({"able", "ible"});
        break;
      case 'n':
        matched = any({"ant", "ement", "ment", "ent"});
        break;
      case 'o':
        if (ends("ion") && j_ >= 0 && (at(j_) == 's' || at(j_) == 't')) {
          matched = true;
        } else {
          matched = any({"ou"});
        }
        break;
      case 's':
        matched = any({"ism"});
        break;
      case 't':
        matched = any({"ate", "iti"});
        break;
      case 'u':
        matched = any({"ous"});
        break;
      case 'v':
        matched = any({"ive"});
        break;
      case 'z':
        matched = any({"ize"});
        break;
      default:
        break;
    }
    if (matched && m() > 1) {
      k_ = j_;
      truncate();
    }
  }

  void step5() {
    j_ = k_;
    if (at(k_) == 'e') {
      const int a = m();
      if (a > 1 || (a == 1 && !cvc(k_ - 1))) --k_;
    }
    if (at(k_) == 'l' && double_c(k_) && m() > 1) --k_;
    truncate();
  }
};

class ItalianStemmer {
 public:
  explicit ItalianStemmer(std::u32string word) : w_(std::move(word)) {}

  std::u32string run() {
    prelude();
    mark_regions();
    step0();
    if (!step1()) step2();
    step3a();
    step3b();
    for (auto& c : w_) {
      if (c == U'I') c = U'i';
      if (c == U'U') c = U'u';
    }
    return w_;
  }

 private:
  std::u32string w_;
  std::size_t rv_ = 0, r1_ = 0, r2_ = 0;

  static bool vowel(char32_t c) {
    switch (c) {
      case U'a':
      case U'e':
      case U'i':
      case U'o':
      case U'u':
      case U'à':
      case U'è':
      case U'ì':
      case U'ò':
      case U'ù':
        return true;
      default:
        return false;
    }
  }

  void prelude() {
    for (auto& c : w_) {
      switch (c) {
        case U'á': c = U'à'; break;
        case U'é': c = U'è'; break;
        case U'í': c = U'ì'; break;
        case U'ó': c = U'ò'; break;
        case U'ú': c = U'ù'; break;
        default: break;
      }
    }
    for (std::size_t i = 1; i < w_.size(); ++i) {
      if (w_[i] == U'u' && w_[i - 1] == U'q') w_[i] = U'U';
    }
    for (std::size_t i = 1; i + 1 < w_.size(); ++i) {
      if (vowel(w_[i - 1]) && vowel(w_[i + 1])) {
        if (w_[i] == U'u') w_[i] = U'U';
        if (w_[i] == U'i') w_[i] = U'I';
      }
    }
  }

  std::size_t region_after(std::size_t from) const {
    for (std::size_t i = from + 1; i < w_.size(); ++i) {
      if (!vowel(w_[i]) && vowel(w_[i - 1])) return i + 1;
    }
    return w_.size();
  }

  void mark_regions() {
    const std::size_t n = w_.size();
    rv_ = n;
    if (n >= 2) {
      if (!vowel(w_[1])) {
        for (std::size_t i = 2; i < n; ++i) {
          if (vowel(w_[i])) {
            rv_ = i + 1;
            break;
          }
        }
      } else if (vowel(w_[0])) {
        for (std::size_t i = 2; i < n; ++i) {
          if (!vowel(w_[i])) {
            rv_ = i + 1;
            break;
          }
        }
      } else {
        rv_ = std::min<std::size_t>(3, n);
      }
    }
    r1_ = region_after(0);
    if (r1_ > n) r1_ = n;
    r2_ = r1_ < n ? region_after(r1_) : n;
    if (r2_ > n) r2_ = n;
  }

  bool ends(std::u32string_view s) const {
    return w_.size() >= s.size() && std::u32string_view(w_).substr(w_.size() - s.size()) == s;
  }

  std::size_t start_of(std::u32string_view s) const { return w_.size() - s.size(); }

  // Longest suffix from `list`, or empty.
  std::u32string_view longest(std::span<const std::u32string_view> list) const {
    std::u32string_view best;
    for (auto s : list) {
      if (s.size() > best.size() && ends(s)) best = s;
    }
    return best;
  }

  void cut(std::size_t len) { w_.resize(w_.size() - len); }

  void step0() {
    static constexpr std::u32string_view pronouns[] = {
        U"ci",     U"gli",    U"la",     U"le",     U"li",     U"lo",   U"mi",   U"ne",   U"si",   U"ti",
        U"vi",     U"sene",   U"gliela", U"gliele", U"glieli", U"glielo", U"gliene", U"mela", U"mele", U"meli",
        U"melo",   U"mene",   U"tela",   U"tele",   U"teli",   U"telo", U"tene", U"cela", U"cele", U"celi",
        U"celo",   U"cene",   U"vela",   U"vele",   U"veli",   U"velo", U"vene"};
    const auto p = longest(pronouns);
    if (p.empty()) return;
    const std::u32string_view before = std::u32string_view(w_).substr(0, start_of(p));
    for (std::u32string_view e : {U"ando", U"endo"}) {
      if (before.ends_with(e) && before.size() - e.size() >= rv_) {
        cut(p.size());
        return;
      }
    }
    for (std::u32string_view e : {U"ar", U"er", U"ir"}) {
      if (before.ends_with(e) && before.size() - e.size() >= rv_) {
        cut(p.size());
        w_.push_back(U'e');
        return;
      }
    }
  }

  bool in_r2(std::u32string_view s) const { return start_of(s) >= r2_; }
  bool in_r1(std::u32string_view s) const { return start_of(s) >= r1_; }
  bool in_rv(std::u32string_view s) const { return start_of(s) >= rv_; }

  // Deletes `s` if present and in R2.
  bool drop_r2(std::u32string_view s) {
    if (ends(s) && in_r2(s)) {
      cut(s.size());
      return true;
    }
    return false;
  }

  bool step1() {
    static constexpr std::u32string_view suffixes[] = {
        U"anza",    U"anze",    U"ico",    U"ici",    U"ica",    U"ice",    U"iche",   U"ichi",   U"ismo",
        U"ismi",    U"abile",   U"abili",  U"ibile",  U"ibili",  U"ista",   U"iste",   U"isti",   U"istà",
        U"istè",    U"istì",    U"oso",    U"osi",    U"osa",    U"ose",    U"mente",  U"atrice", U"atrici",
        U"ante",    U"anti",    U"azione", U"azioni", U"atore",  U"atori",  U"logia",  U"logie",  U"uzione",
        U"uzioni",  U"usione",  U"usioni", U"enza",   U"enze",   U"amento", U"amenti", U"imento", U"imenti",
        U"amente",  U"ità",     U"ivo",    U"ivi",    U"iva",    U"ive"};
    const auto s = longest(suffixes);
    if (s.empty()) return false;

    auto one_of = [&](std::initializer_list<std::u32string_view> group) {
      return std::find(group.begin(), group.end(), s) != group.end();
    };

    if (one_of({U"azione", U"azioni", U"atore", U"atori"})) {
      if (!in_r2(s)) return false;
      cut(s.size());
      drop_r2(U"ic");
      return true;
    }
    if (one_of({U"logia", U"logie"})) {
      if (!in_r2(s)) return false;
      cut(s.size());
      w_ += U"log";
      return true;
    }
    if (one_of({U"uzione", U"uzioni", U"usione", U"usioni"})) {
      if (!in_r2(s)) return false;
      cut(s.size());
      w_ += U"u";
      return true;
    }
    if (one_of({U"enza", U"enze"})) {
      if (!in_r2(s)) return false;
      cut(s.size());
      w_ += U"ente";
      return true;
    }
    if (one_of({U"amento", U"amenti", U"imento", U"imenti"})) {
      if (!in_rv(s)) return false;
      cut(s.size());
      return true;
    }
    if (s == U"amente") {
      if (!in_r1(s)) return false;
      cut(s.size());
      if (drop_r2(U"iv")) {
        drop_r2(U"at");
      } else {
        for (std::u32string_view pre : {U"abil", U"ic", U"os"}) {
          if (drop_r2(pre)) break;
        }
      }
      return true;
    }
    if (s == U"ità") {
      if (!in_r2(s)) return false;
      cut(s.size());
      for (std::u32string_view pre : {U"abil", U"ic", U"iv"}) {
        if (drop_r2(pre)) break;
      }
      return true;
    }
    if (one_of({U"ivo", U"ivi", U"iva", U"ive"})) {
      if (!in_r2(s)) return false;
      cut(s.size());
      if (drop_r2(U"at")) drop_r2(U"ic");
      return true;
    }
    if (!in_r2(s)) return false;
    cut(s.size());
    return true;
  }

  void step2() {
    static constexpr std::u32string_view suffixes[] = {
        U"ammo",   U"ando",   U"ano",    U"are",      U"arono",  U"asse",   U"assero", U"assi",   U"assimo",
        U"ata",    U"ate",    U"ati",    U"ato",      U"ava",    U"avamo",  U"avano",  U"avate",  U"avi",
        U"avo",    U"emmo",   U"enda",   U"ende",     U"endi",   U"endo",   U"erà",    U"erai",   U"eranno",
        U"ere",    U"erebbe", U"erebbero", U"erei",   U"eremmo", U"eremo",  U"ereste", U"eresti", U"erete",
        U"erò",    U"erono",  U"essero", U"ete",      U"eva",    U"evamo",  U"evano",  U"evate",  U"evi",
        U"evo",    U"Yamo",   U"iamo",   U"immo",     U"irà",    U"irai",   U"iranno", U"ire",    U"irebbe",
        U"irebbero", U"irei", U"iremmo", U"iremo",    U"ireste", U"iresti", U"irete",  U"irò",    U"irono",
        U"isca",   U"iscano", U"isce",   U"isci",     U"isco",   U"iscono", U"issero", U"ita",    U"ite",
        U"iti",    U"ito",    U"iva",    U"ivamo",    U"ivano",  U"ivate",  U"ivi",    U"ivo",    U"ar",
        U"ir"};
    // Matching is confined to RV.
    std::u32string_view best;
    for (auto s : suffixes) {
      if (s.size() > best.size() && ends(s) && in_rv(s)) best = s;
    }
    if (!best.empty()) cut(best.size());
  }

  void step3a() {
    if (w_.empty()) return;
    const char32_t c = w_.back();
    if ((c == U'a' || c == U'e' || c == U'i' || c == U'o' || c == U'à' || c == U'è' || c == U'ì' || c == U'ò') &&
        w_.size() - 1 >= rv_) {
      w_.pop_back();
      if (!w_.empty() && w_.back() == U'i' && w_.size() - 1 >= rv_) w_.pop_back();
    }
  }

  void step3b() {
    if ((ends(U"ch") || ends(U"gh")) && start_of(U"ch") >= rv_) w_.pop_back();
  }
};

}  // namespace detail

inline std::string porter(std::string word) {
  for (unsigned char c : word) {
    if (c < 'a' || c > 'z') return word;
  }
  return detail::Porter(std::move(word)).run();
}

inline std::string italian(std::string_view word) {
  return utf8::from_u32(detail::ItalianStemmer(utf8::to_u32(word)).run());
}

}  // namespace brandpulse::stem
