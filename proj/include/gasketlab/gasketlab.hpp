#pragma once

#include "gasketlab/automaton.hpp"
#include "gasketlab/classify.hpp"
#include "gasketlab/commands.hpp"
#include "gasketlab/geometry.hpp"
#include "gasketlab/io.hpp"
#include "gasketlab/parallel.hpp"
#include "gasketlab/rational.hpp"
#include "gasketlab/render.hpp"
#include "gasketlab/report.hpp"
#include "gasketlab/separation.hpp"
#include "gasketlab/simplify.hpp"
#include "gasketlab/symbolic.hpp"
#include "gasketlab/transducer.hpp"
