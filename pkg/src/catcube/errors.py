"""Exception hierarchy.

Every error kind carries its own process exit code so the command-line
front end can map failures 1:1 onto exit statuses.
"""

from __future__ import annotations


class CatCubeError(Exception):
    exit_code = 10


class SchemaError(CatCubeError):
    exit_code = 11


class NonSimpleSkeleton(CatCubeError):
    exit_code = 12


class BadCubeShape(CatCubeError):
    exit_code = 13


class UnknownVertex(CatCubeError, KeyError):
    exit_code = 14

    def __str__(self) -> str:
        return Exception.__str__(self)


class UnknownGenerator(CatCubeError, KeyError):
    exit_code = 15

    def __str__(self) -> str:
        return Exception.__str__(self)


class BallTooLarge(CatCubeError):
    exit_code = 16


class DisconnectedInput(CatCubeError):
    exit_code = 17


class NotFlag(CatCubeError):
    exit_code = 18


class NonSeparating(CatCubeError):
    exit_code = 19


class NoHorizonCycle(CatCubeError):
    exit_code = 20


class NotAdmissible(CatCubeError):
    exit_code = 21

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class DisconnectedHorizon(CatCubeError):
    exit_code = 22


class DomainTooSmall(CatCubeError):
    exit_code = 23


class OverlappingConnectors(CatCubeError):
    exit_code = 24


class NoCoboundary(CatCubeError):
    exit_code = 25

    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class OutOfDomain(CatCubeError):
    exit_code = 26


class NotOnTrace(CatCubeError):
    exit_code = 27


class NotACover(CatCubeError):
    exit_code = 28


class InvalidGrid(CatCubeError):
    exit_code = 29
