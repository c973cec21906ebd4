package test.dcc;

public class ClassB {
}
