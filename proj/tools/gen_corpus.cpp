// Writes a synthetic corpus (JSONL) and its gold Penman graphs with
// alignments, ready for `hiarg run-all`.

#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "synthetic_corpus.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic argument corpus generator"};
  std::string out;
  synth::Options opts;
  app.add_option("--out", out, "Output directory")->required();
  app.add_option("--docs", opts.documents, "Number of documents");
  app.add_option("--min-sentences", opts.min_sentences, "Fewest premise sentences per document");
  app.add_option("--max-sentences", opts.max_sentences, "Most premise sentences per document");
  app.add_option("--conclusions", opts.conclusions, "Number of distinct conclusions");
  app.add_option("--seed", opts.seed, "Generator seed");
  CLI11_PARSE(app, argc, argv);
  if (opts.min_sentences == 0 || opts.max_sentences < opts.min_sentences || opts.conclusions == 0) {
    std::cerr << "error: bad sentence or conclusion counts\n";
    return 1;
  }
  std::filesystem::create_directories(out);
  const auto docs = synth::corpus(opts);
  synth::write_files(docs, out + "/corpus.jsonl", out + "/graphs.penman");
  std::size_t sentences = 0;
  std::size_t rejected = 0;
  for (const auto& d : docs) {
    sentences += d.sentences.size() + 1;
    rejected += d.rejected.size();
  }
  std::cout << "documents: " << docs.size() << "\nsentences: " << sentences
            << "\nrejected: " << rejected << '\n';
  return 0;
}
