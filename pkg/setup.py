from setuptools import setup

name = "epsilon_doctrine"

setup()
