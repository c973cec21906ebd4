package test.dit;

public class ClassB extends ClassA {
}
