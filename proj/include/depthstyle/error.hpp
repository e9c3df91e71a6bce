// Copyright 2026 The depthstyle Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace depthstyle {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Precondition violation on a public operation (shape, range, count).
class InvalidInput : public Error
{
public:
  using Error::Error;
};

/// Malformed weight file or weight store that does not match the manifest.
class FormatError : public Error
{
public:
  using Error::Error;
};

/// Depth map without any spread (max == min).
class DegenerateDepth : public Error
{
public:
  using Error::Error;
};

class IoError : public Error
{
public:
  using Error::Error;
};

} // namespace depthstyle
