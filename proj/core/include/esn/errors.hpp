// Copyright (c) 2026 The edgespeechnet-cpp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ESN_ERRORS_HPP_
#define ESN_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace esn {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// audio / file I/O
class IoError : public Error {
 public:
  using Error::Error;
};
class MalformedWav : public Error {
 public:
  using Error::Error;
};
class UnsupportedFormat : public Error {
 public:
  using Error::Error;
};
class ParseError : public Error {
 public:
  using Error::Error;
};

// signal processing
class FftSizeNotPowerOfTwo : public Error {
 public:
  using Error::Error;
};

// tensor engine
class ChannelMismatch : public Error {
 public:
  using Error::Error;
};
class ShapeMismatch : public Error {
 public:
  using Error::Error;
};

// architectures
class UnknownArchitecture : public Error {
 public:
  using Error::Error;
};
class MalformedSpec : public Error {
 public:
  using Error::Error;
};

// dataset / training
class MissingDirectory : public Error {
 public:
  using Error::Error;
};
class EmptyDataset : public Error {
 public:
  using Error::Error;
};
class NonFiniteLoss : public Error {
 public:
  NonFiniteLoss(const std::string& msg, int epoch) : Error(msg), epoch(epoch) {}
  int epoch;
};

// design exploration
class InvalidMetrics : public Error {
 public:
  using Error::Error;
};
class InvalidShape : public Error {
 public:
  using Error::Error;
};
class NoFeasibleCandidate : public Error {
 public:
  NoFeasibleCandidate(const std::string& msg, double best_accuracy)
      : Error(msg), best_accuracy(best_accuracy) {}
  double best_accuracy;
};

}  // namespace esn

#endif  // ESN_ERRORS_HPP_
