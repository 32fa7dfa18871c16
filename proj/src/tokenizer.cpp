// Copyright 2026 The Tracemark Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "tracemark/tokenizer.hpp"

namespace tracemark::tok {

namespace {

const char* const kCommonWords[] = {
    "acc", "accum", "alpha", "amount", "angle", "answer", "arg", "args",
    "arr", "avg", "axis", "base", "batch", "beta", "bias", "bit", "bits",
    "block", "board", "body", "bound", "bounds", "box", "buf", "buffer",
    "byte", "cache", "cap", "capacity", "carry", "cell", "cells", "center",
    "chain", "changed", "char", "chars", "check", "chunk", "clean", "cnt",
    "code", "codes", "col", "cols", "color", "combo", "cost", "costs",
    "count", "counter", "cur", "curr", "current", "cursor", "data", "day",
    "days", "debug", "degree", "delta", "denom", "depth", "dest", "diff",
    "digit", "digits", "dim", "dims", "dist", "dists", "div", "done", "dot",
    "dst", "dur", "edge", "edges", "elem", "elems", "end", "entry", "env",
    "eps", "err", "error", "even", "event", "extra", "fact", "factor",
    "feed", "field", "fields", "file", "files", "fill", "first", "flag",
    "flags", "flat", "flow", "fn", "found", "frame", "freq", "front", "full",
    "func", "gain", "gamma", "gap", "gaps", "grid", "group", "groups",
    "half", "head", "heap", "height", "high", "hit", "hits", "hour", "idx",
    "imag", "index", "info", "init", "inner", "input", "inputs", "item",
    "items", "iter", "joint", "key", "keys", "kind", "label", "labels",
    "last", "layer", "left", "len", "length", "level", "limit", "line",
    "lines", "link", "lo", "load", "loc", "local", "loop", "low", "lower",
    "map", "mark", "mask", "mat", "max", "maybe", "mean", "med", "member",
    "memo", "mid", "minute", "mod", "mode", "month", "moves", "msg", "mult",
    "name", "names", "neg", "neighbor", "net", "new", "next", "node",
    "nodes", "noise", "norm", "note", "num", "nums", "obj", "odd", "offset",
    "order", "origin", "out", "outer", "output", "outputs", "pad", "page",
    "pair", "pairs", "par", "parent", "part", "parts", "pat", "path",
    "paths", "pattern", "peak", "period", "phase", "piece", "pivot", "place",
    "plan", "point", "points", "pos", "power", "prefix", "prev", "price",
    "prime", "prob", "prod", "progress", "ptr", "quad", "query", "queue",
    "quot", "radius", "rank", "rate", "ratio", "raw", "real", "rec",
    "record", "rem", "remainder", "res", "rest", "result", "results",
    "right", "ring", "root", "rot", "route", "row", "rows", "rule", "rules",
    "run", "runs", "salt", "sample", "samples", "scale", "score", "scores",
    "second", "seed", "seen", "seg", "sel", "sentinel", "seq", "series",
    "shift", "side", "sides", "sign", "size", "sizes", "skip", "slot",
    "slots", "small", "smooth", "snap", "source", "span", "spans", "speed",
    "split", "spot", "src", "stack", "start", "state", "states", "stats",
    "step", "steps", "stop", "store", "stride", "string", "sub", "suffix",
    "sum", "tail", "tally", "target", "task", "tasks", "temp", "term",
    "terms", "text", "tick", "tile", "tiles", "time", "times", "tmp",
    "token", "tokens", "top", "total", "totals", "trace", "track", "tree",
    "trial", "turn", "unit", "units", "upper", "used", "user", "val",
    "vals", "value", "values", "var", "vec", "vel", "vertex", "visit",
    "visited", "wave", "weight", "weights", "wheel", "width", "window",
    "word", "words", "work", "world", "year", "zero", "zone"};

const char* const kLanguageWords[] = {
    "False", "None",   "True",  "and",      "as",     "assert", "async",
    "await", "break",  "class", "continue", "def",    "del",    "elif",
    "else",  "except", "finally", "for",    "from",   "global", "if",
    "import", "in",    "is",    "lambda",   "match",  "nonlocal", "not",
    "or",    "pass",   "raise", "return",   "try",    "while",  "with",
    "yield", "case",   "self",  "cls",      "print",  "range",  "enumerate",
    "assertEqual"};

const char* const kPrefixes[] = {
    "new", "old", "max", "min", "cur", "next", "prev", "tmp", "raw", "src",
    "dst", "top", "low", "high", "left", "right", "best", "last", "first",
    "total", "sub", "out", "base", "half", "mid", "big", "small", "start",
    "end", "loop", "node", "edge", "row", "col", "key", "val", "item",
    "word", "char", "bit", "byte", "sum", "avg", "acc", "run", "step",
    "head", "tail", "good", "bad"};

const char* const kSuffixes[] = {
    "val", "idx", "cnt", "len", "pos", "buf", "key", "map", "set", "sum",
    "tag", "row", "col", "arg", "num", "ptr", "ref", "str", "lst", "seq",
    "tot", "acc", "tmp", "cap", "lim", "off", "gap", "dir", "loc", "box",
    "bin", "lab", "wid", "rng", "dim", "deg", "lvl", "pct", "amt", "qty",
    "vec", "mat", "fac", "res"};

const char* const kMeasures[] = {
    "count", "total", "delta", "index", "offset", "weight", "score", "size",
    "depth", "width", "height", "length", "value", "rank", "level", "phase",
    "shift", "scale", "ratio", "limit"};

const char* const kAxes[] = {"a",   "b",   "c",   "d",    "e",  "f",  "g",
                             "h",   "i",   "j",   "one",  "two", "lo", "hi",
                             "x",   "y",   "z",   "zero", "u",  "v"};

const char* const kNumbered[] = {"tmp", "val", "idx", "cnt", "buf", "arr",
                                 "vec", "pos", "acc", "res", "var", "num",
                                 "seq", "tot", "reg", "key", "dim", "col",
                                 "row", "ptr"};

}  // namespace

Vocabulary::Vocabulary() {
  strings_.reserve(7200);
  // ids 0..255: raw byte fallback.
  for (int b = 0; b < 256; ++b) {
    strings_.push_back(std::string(1, static_cast<char>(b)));
  }

  std::vector<std::string> words;
  words.reserve(3400);
  auto add = [&words](std::string w) { words.push_back(std::move(w)); };

  for (char c = 'a'; c <= 'z'; ++c) add(std::string(1, c));
  add("_");
  for (const char* w : kLanguageWords) add(w);
  for (const char* w : kCommonWords) add(w);
  for (const char* p : kPrefixes)
    for (const char* s : kSuffixes) add(std::string(p) + "_" + s);
  for (const char* m : kMeasures)
    for (const char* a : kAxes) add(std::string(m) + "_" + a);
  for (const char* b : kNumbered)
    for (char d = '1'; d <= '9'; ++d) add(std::string(b) + d);

  // Insertion order defines ids: each distinct word contributes the plain
  // form then the space-merged form.
  std::unordered_map<std::string, bool> seen;
  for (const auto& w : words) {
    if (!seen.emplace(w, true).second) continue;
    strings_.push_back(w);
    strings_.push_back(" " + w);
  }

  lookup_.reserve(strings_.size());
  for (size_t i = 256; i < strings_.size(); ++i) {
    lookup_.emplace(std::string_view(strings_[i]),
                    static_cast<TokenId>(i));
  }
  tokenizer_id_ = "mocktok-v1/" + std::to_string(strings_.size());
}

const Vocabulary& Vocabulary::instance() {
  static const Vocabulary vocab;
  return vocab;
}

std::optional<TokenId> Vocabulary::id_of(std::string_view text) const {
  if (text.size() == 1) {
    auto it = lookup_.find(text);
    if (it != lookup_.end()) return it->second;
    return static_cast<TokenId>(static_cast<unsigned char>(text[0]));
  }
  auto it = lookup_.find(text);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::vector<Token> Vocabulary::encode(std::string_view text) const {
  std::vector<Token> out;
  out.reserve(text.size() / 3 + 8);
  size_t pos = 0;

  auto emit_bytes = [&](size_t from, size_t to) {
    for (size_t i = from; i < to; ++i) {
      out.push_back(Token{static_cast<TokenId>(
                              static_cast<unsigned char>(text[i])),
                          static_cast<uint32_t>(i),
                          static_cast<uint32_t>(i + 1)});
    }
  };

  auto scan_ident = [&](size_t from) {
    size_t end = from + 1;
    while (end < text.size() && is_ident_char(text[end])) ++end;
    return end;
  };

  while (pos < text.size()) {
    char c = text[pos];
    if (c == ' ' && pos + 1 < text.size() && is_ident_start(text[pos + 1])) {
      size_t end = scan_ident(pos + 1);
      auto it = lookup_.find(text.substr(pos, end - pos));
      if (it != lookup_.end()) {
        out.push_back(Token{it->second, static_cast<uint32_t>(pos),
                            static_cast<uint32_t>(end)});
        pos = end;
        continue;
      }
      emit_bytes(pos, pos + 1);
      ++pos;
      continue;
    }
    if (is_ident_start(c)) {
      size_t end = scan_ident(pos);
      auto it = lookup_.find(text.substr(pos, end - pos));
      if (it != lookup_.end()) {
        out.push_back(Token{it->second, static_cast<uint32_t>(pos),
                            static_cast<uint32_t>(end)});
      } else {
        emit_bytes(pos, end);
      }
      pos = end;
      continue;
    }
    emit_bytes(pos, pos + 1);
    ++pos;
  }
  return out;
}

}  // namespace tracemark::tok
